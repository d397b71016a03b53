#pragma once

#include <iosfwd>

#include "wscat/csv.hpp"
#include "wscat/run_config.hpp"

namespace wscat {

enum ExitStatus : int {
    kExitSuccess = 0,
    kExitCheckFailed = 1,  // verify ran, at least one cross-method check failed
    kExitValidation = 2,
    kExitNumerical = 3,
};

struct RunOutput {
    Table table;
    bool checks_passed = true;
};

// Executes one command; module errors propagate as exceptions.
RunOutput run_command(const RunConfig& cfg);

// Verify tolerances, shared with the acceptance suite.
struct VerifyTolerances {
    double identity = 1e-10;
    double unitarity = 1e-8;
    double modulus = 1e-10;
    double transfer = 1e-6;
    double dynamics = 1e-2;
    double lattice_ratio = 1e-10;
    double lattice_coefficient = 1e-8;
};

// weyl-scatter <command> --config <path> [--out <path>] [--format csv|json] [--seed N]
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace wscat
