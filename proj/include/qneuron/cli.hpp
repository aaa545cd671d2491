#pragma once

namespace qneuron {

// Subcommands: train, validate, estimate, singleshot, gradcheck, xent, table1.
// Returns 0 on success, 1 on configuration errors and 2 on numeric failures.
int run(int argc, char** argv);

}  // namespace qneuron
