// Canned figure-data commands: each one evaluates a fixed, documented grid
// and writes the CSV (plus a manifest) into the output directory. Data only;
// plotting is left to external tools.

#pragma once

#include <string>
#include <vector>

#include "sshwg/sweep.hpp"

namespace sshwg {

std::vector<std::string> figure_names();

// Throws UnknownFigure for unrecognized names.
RunManifest reproduce_figure(const std::string& name,
                             const std::string& out_dir, int workers);

}  // namespace sshwg
