#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace podles::cli {

struct CliConfig {
    std::string subcommand;
    std::string q = "0.5";
    std::string t = "0";
    int lmax2 = 21;
    unsigned prec = 53;
    double tol = 1e-10;
    int guard = 2;
    int N2 = 1;
    double c1 = 1.0;
    double c2 = 0.5;
    std::string out;
    /// json, csv or text; empty picks the subcommand default.
    std::string format;
    bool timing = false;

    std::string method = "trace";
    int residue = 0;
    std::string z = "4";
    std::string zim = "0";
    std::string elem = "1";
    int bb = 0;
    std::string op = "D";
};

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Parses the arguments (args[0] is the program name) and runs the chosen
/// subcommand. Results go to `out` unless --out names a file; diagnostics
/// go to `err`. PODLES_PREC_BITS, when set, overrides --prec.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace podles::cli
