#pragma once

#include "gaugecalc/gauge.hpp"
#include "gaugecalc/holonomy.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gaugecalc::cli {

enum class Command { verify, torus_curve, residual, holonomy, ab, wong, spectrum };
enum class OutputFormat { report_text, structured_record, csv };

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitFailed = 2;

struct RunConfig {
    Command command = Command::verify;
    int grid = 32;
    std::optional<int> steps;
    std::optional<double> tol;
    std::uint64_t seed = 7;
    std::string out;
    OutputFormat format = OutputFormat::report_text;
    double k = 0.5;
    int winding = 1;
    double lambda = 1.0;
    int samples = 11;
    std::string loop = "x:1";
    std::string field = "pi-dx";
    std::string family = "seamed";
    int rank = 2;
    std::array<double, 3> spin{1.0, 0.0, 0.0};
};

/// Thrown for any invalid user input; the message names the offending field.
struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string to_string(Command c);
std::string to_string(OutputFormat f);
Command parse_command(const std::string& s);
OutputFormat parse_format(const std::string& s);

/// Applies a config document onto cfg. Unknown keys and type errors throw InvalidInput.
void apply_config(const nlohmann::json& doc, RunConfig& cfg);
/// Reads and applies a config file; parse errors carry the line and column.
void apply_config_file(const std::string& path, RunConfig& cfg);
/// Range checks on every numeric parameter.
void validate(const RunConfig& cfg);
nlohmann::json config_echo(const RunConfig& cfg);

/// Parses argv (config file first, explicit flags override). Returns the exit code
/// to stop with (help or invalid input), or nothing to proceed.
std::optional<int> parse_arguments(int argc, const char* const* argv, RunConfig& cfg, std::ostream& out,
                                   std::ostream& err);

/// Named closed-form fields: zero, pi-dx, pi-dx-lambda, sin-dy, random.
Connection field_connection(const std::string& name, const TorusGrid& grid, int rank, double lambda,
                            std::uint64_t seed);
TorusPotential field_potential(const std::string& name, int grid, int rank, double lambda, std::uint64_t seed);

/// Loop specs: x:n, y:n, torus:wx,wy[,bx,by], circle:cx,cy,r[,n], segment:x0,y0,x1,y1.
ParametricPath parse_loop(const std::string& text);

/// Runs the command and writes its report to `out` (or to cfg.out when set).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// parse_arguments followed by run.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaugecalc::cli
