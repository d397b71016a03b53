#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wscat/dynamics.hpp"
#include "wscat/potential.hpp"
#include "wscat/weyl.hpp"

namespace wscat {

enum class Command { MFunction, Scatter, Reflect, Wavepacket, Verify, Scan };
enum class OutputFormat { Csv, Json };

Command parse_command(const std::string& name);
const char* command_name(Command c) noexcept;
OutputFormat parse_format(const std::string& name);

struct LatticeSettings {
    std::size_t N = 200;
    double h = 0.05;
    std::size_t models = 20;
};

struct RunConfig {
    Potential potential;
    Command command = Command::Reflect;
    std::vector<double> lambda_grid;
    SolverOptions solver;
    PacketSpec packet;
    std::string trace_path;
    std::size_t trace_stride = 0;
    std::string output_path;  // empty = stdout
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 0;
    double s_threshold = 1e-8;
    double zero_tol = 1e-6;
    double slab_width = 0.005;
    LatticeSettings lattice;
    unsigned threads = 0;
};

// Potential description, e.g. {"kind": "square_barrier", "height": 2.0,
// "half_width": 0.5, "center": 0.0}. Sampled potentials may name a two-column
// CSV (x, V) relative to base_dir. Any kind accepts "truncate": tol.
Potential parse_potential(const nlohmann::json& j, const std::filesystem::path& base_dir,
                          const std::string& where = "potential");

// Throws ConfigParseError with line/column or field path diagnostics.
RunConfig parse_run_config(const std::string& text, Command command,
                           const std::filesystem::path& base_dir);

RunConfig load_run_config(const std::filesystem::path& path, Command command);

// {min, max, count} -> evenly spaced nodes, or an explicit strictly
// increasing list.
std::vector<double> parse_grid(const nlohmann::json& j, const std::string& where);

std::vector<double> linear_grid(double lo, double hi, std::size_t count);

}  // namespace wscat
