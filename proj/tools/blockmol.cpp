//
// Project blockmol - Copyright 2026 blockmol contributors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdio>

#include "CLI11.hpp"
#include "blockmol/molgraph.hpp"

int main(int argc, char **argv) {
  CLI::App app{"blockmol: block tokenization toolkit for small molecules"};
  app.set_version_flag("--version", "blockmol 0.1.0");
  app.require_subcommand(0);
  CLI11_PARSE(app, argc, argv);
  return 0;
}
