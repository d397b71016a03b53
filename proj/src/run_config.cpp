#include "wscat/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "wscat/csv.hpp"
#include "wscat/errors.hpp"

namespace wscat {
namespace {

using nlohmann::json;

constexpr const char* kOp = "cli::parse_config";

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw ConfigParseError(kOp, where + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(where + "." + it.key(), "unknown field");
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) fail(where + "." + key, "missing required field");
    return obj.at(key);
}

double to_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(where, "expected a finite number");
    return d;
}

double number(const json& obj, const std::string& key, const std::string& where) {
    return to_number(require(obj, key, where), where + "." + key);
}

double number_or(const json& obj, const std::string& key, const std::string& where, double dflt) {
    return obj.contains(key) ? to_number(obj.at(key), where + "." + key) : dflt;
}

std::uint64_t unsigned_or(const json& obj, const std::string& key, const std::string& where,
                          std::uint64_t dflt) {
    if (!obj.contains(key)) return dflt;
    const json& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        fail(where + "." + key, "expected a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(to_number(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

const json& object(const json& v, const std::string& where) {
    if (!v.is_object()) fail(where, "expected an object");
    return v;
}

std::string string_field(const json& obj, const std::string& key, const std::string& where) {
    const json& v = require(obj, key, where);
    if (!v.is_string()) fail(where + "." + key, "expected a string");
    return v.get<std::string>();
}

SampledPotential read_sampled_csv(const std::filesystem::path& path, const std::string& where) {
    std::ifstream in(path);
    if (!in) fail(where, "cannot open CSV file '" + path.string() + "'");
    SampledPotential s;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ','))
            fail(where, path.string() + ":" + std::to_string(lineno) + ": expected two columns");
        char* end_a = nullptr;
        char* end_b = nullptr;
        const double x = std::strtod(a.c_str(), &end_a);
        const double v = std::strtod(b.c_str(), &end_b);
        const bool numeric = end_a != a.c_str() && end_b != b.c_str();
        if (!numeric) {
            if (s.xs.empty()) continue;  // header row
            fail(where, path.string() + ":" + std::to_string(lineno) + ": non-numeric entry");
        }
        s.xs.push_back(x);
        s.vs.push_back(v);
    }
    return s;
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "mfunction") return Command::MFunction;
    if (name == "scatter") return Command::Scatter;
    if (name == "reflect") return Command::Reflect;
    if (name == "wavepacket") return Command::Wavepacket;
    if (name == "verify") return Command::Verify;
    if (name == "scan") return Command::Scan;
    throw ConfigParseError("cli::parse_command", "unknown command '" + name + "'");
}

const char* command_name(Command c) noexcept {
    switch (c) {
        case Command::MFunction: return "mfunction";
        case Command::Scatter: return "scatter";
        case Command::Reflect: return "reflect";
        case Command::Wavepacket: return "wavepacket";
        case Command::Verify: return "verify";
        case Command::Scan: return "scan";
    }
    return "?";
}

OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::Csv;
    if (name == "json") return OutputFormat::Json;
    throw ConfigParseError("cli::parse_format", "format must be csv or json, got '" + name + "'");
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    std::vector<double> g(count);
    if (count == 1) {
        g[0] = lo;
        return g;
    }
    for (std::size_t i = 0; i < count; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    g.back() = hi;
    return g;
}

std::vector<double> parse_grid(const json& j, const std::string& where) {
    if (j.is_array()) {
        auto g = number_list(j, where);
        if (g.empty()) fail(where, "grid is empty");
        for (std::size_t i = 1; i < g.size(); ++i)
            if (!(g[i] > g[i - 1])) fail(where, "grid must be strictly increasing");
        return g;
    }
    object(j, where);
    reject_unknown(j, where, {"min", "max", "count"});
    const double lo = number(j, "min", where);
    const double hi = number(j, "max", where);
    const json& c = require(j, "count", where);
    if (!c.is_number_integer() || c.get<long long>() < 1) fail(where + ".count", "expected an integer >= 1");
    if (!(lo < hi)) fail(where, "min must be smaller than max");
    return linear_grid(lo, hi, c.get<std::size_t>());
}

Potential parse_potential(const json& j, const std::filesystem::path& base_dir,
                          const std::string& where) {
    object(j, where);
    const std::string kind = string_field(j, "kind", where);
    std::optional<double> truncate;
    if (j.contains("truncate")) truncate = to_number(j.at("truncate"), where + ".truncate");

    PotentialKind pk;
    if (kind == "zero") {
        reject_unknown(j, where, {"kind", "truncate"});
        pk = ZeroPotential{};
    } else if (kind == "square_barrier") {
        reject_unknown(j, where, {"kind", "truncate", "height", "half_width", "center"});
        pk = SquareBarrier{number(j, "height", where), number(j, "half_width", where),
                           number_or(j, "center", where, 0.0)};
    } else if (kind == "poschl_teller") {
        reject_unknown(j, where, {"kind", "truncate", "nu"});
        const json& nu = require(j, "nu", where);
        if (!nu.is_number_integer()) fail(where + ".nu", "expected a positive integer");
        pk = PoschlTeller{nu.get<int>()};
    } else if (kind == "gaussian") {
        reject_unknown(j, where, {"kind", "truncate", "amplitude", "sigma", "center"});
        pk = GaussianBump{number(j, "amplitude", where), number(j, "sigma", where),
                          number_or(j, "center", where, 0.0)};
    } else if (kind == "step") {
        reject_unknown(j, where, {"kind", "truncate", "left_value", "right_value"});
        pk = StepPotential{number(j, "left_value", where), number(j, "right_value", where)};
    } else if (kind == "sampled") {
        reject_unknown(j, where, {"kind", "truncate", "xs", "vs", "csv", "tail_left", "tail_right"});
        SampledPotential s;
        if (j.contains("csv")) {
            if (j.contains("xs") || j.contains("vs")) fail(where, "give either csv or xs/vs, not both");
            const std::filesystem::path rel = string_field(j, "csv", where);
            s = read_sampled_csv(rel.is_absolute() ? rel : base_dir / rel, where + ".csv");
        } else {
            s.xs = number_list(require(j, "xs", where), where + ".xs");
            s.vs = number_list(require(j, "vs", where), where + ".vs");
        }
        s.tail_left = number_or(j, "tail_left", where, 0.0);
        s.tail_right = number_or(j, "tail_right", where, 0.0);
        pk = std::move(s);
    } else {
        fail(where + ".kind", "unknown potential kind '" + kind + "'");
    }

    Potential p(std::move(pk));
    if (truncate) {
        if (!(*truncate > 0.0)) fail(where + ".truncate", "expected a positive tolerance");
        p = p.truncated(*truncate);
    }
    return p;
}

RunConfig parse_run_config(const std::string& text, Command command,
                           const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigParseError(kOp, "line " + std::to_string(line) + ", column " +
                                        std::to_string(col) + ": malformed JSON");
    }
    object(root, "config");
    reject_unknown(root, "config",
                   {"potential", "command", "lambda_grid", "solver", "packet", "output", "seed",
                    "s_threshold", "zero_tol", "slab_width", "lattice", "threads"});

    RunConfig cfg;
    cfg.command = command;
    if (root.contains("command")) {
        const json& c = root.at("command");
        if (!c.is_string() || parse_command(c.get<std::string>()) != command)
            fail("config.command", "does not match the requested command");
    }
    cfg.potential = parse_potential(require(root, "potential", "config"), base_dir, "potential");

    if (root.contains("lambda_grid")) {
        cfg.lambda_grid = parse_grid(root.at("lambda_grid"), "lambda_grid");
    } else if (command == Command::Verify) {
        cfg.lambda_grid = linear_grid(0.5, 8.0, 16);
    } else if (command != Command::Wavepacket) {
        fail("config.lambda_grid", "missing required field");
    }

    if (root.contains("solver")) {
        const json& s = object(root.at("solver"), "solver");
        reject_unknown(s, "solver", {"truncation_tol", "rel_ode_tol", "abs_ode_tol", "eps_ladder",
                                     "renorm_interval"});
        auto& o = cfg.solver;
        o.truncation_tol = number_or(s, "truncation_tol", "solver", o.truncation_tol);
        o.rel_ode_tol = number_or(s, "rel_ode_tol", "solver", o.rel_ode_tol);
        o.abs_ode_tol = number_or(s, "abs_ode_tol", "solver", o.abs_ode_tol);
        if (s.contains("eps_ladder")) o.eps_ladder = number_list(s.at("eps_ladder"), "solver.eps_ladder");
        o.renorm_interval = static_cast<int>(unsigned_or(s, "renorm_interval", "solver",
                                                         static_cast<std::uint64_t>(o.renorm_interval)));
        try {
            o.check();
        } catch (const Error& e) {
            fail("solver", e.what());
        }
    }

    if (root.contains("packet")) {
        const json& s = object(root.at("packet"), "packet");
        reject_unknown(s, "packet", {"x0", "k0", "sigma_x", "L", "N", "dt", "t_max", "trace"});
        auto& pk = cfg.packet;
        pk.x0 = number_or(s, "x0", "packet", pk.x0);
        pk.k0 = number_or(s, "k0", "packet", pk.k0);
        pk.sigma_x = number_or(s, "sigma_x", "packet", pk.sigma_x);
        pk.L = number_or(s, "L", "packet", pk.L);
        pk.N = unsigned_or(s, "N", "packet", pk.N);
        pk.dt = number_or(s, "dt", "packet", pk.dt);
        pk.t_max = number_or(s, "t_max", "packet", pk.t_max);
        if (s.contains("trace")) {
            const json& t = object(s.at("trace"), "packet.trace");
            reject_unknown(t, "packet.trace", {"path", "stride"});
            cfg.trace_path = string_field(t, "path", "packet.trace");
            cfg.trace_stride = unsigned_or(t, "stride", "packet.trace", 100);
            if (cfg.trace_stride == 0) fail("packet.trace.stride", "expected a positive integer");
        }
    }

    if (root.contains("output")) {
        const json& o = object(root.at("output"), "output");
        reject_unknown(o, "output", {"path", "format"});
        if (o.contains("path")) cfg.output_path = string_field(o, "path", "output");
        if (o.contains("format")) {
            try {
                cfg.format = parse_format(string_field(o, "format", "output"));
            } catch (const ConfigParseError&) {
                fail("output.format", "expected csv or json");
            }
        }
    }

    cfg.seed = unsigned_or(root, "seed", "config", 0);
    cfg.threads = static_cast<unsigned>(unsigned_or(root, "threads", "config", 0));
    cfg.s_threshold = number_or(root, "s_threshold", "config", cfg.s_threshold);
    cfg.zero_tol = number_or(root, "zero_tol", "config", cfg.zero_tol);
    cfg.slab_width = number_or(root, "slab_width", "config", cfg.slab_width);
    if (!(cfg.s_threshold > 0.0)) fail("config.s_threshold", "expected a positive number");
    if (!(cfg.zero_tol > 0.0)) fail("config.zero_tol", "expected a positive number");
    if (!(cfg.slab_width > 0.0)) fail("config.slab_width", "expected a positive number");

    if (root.contains("lattice")) {
        const json& l = object(root.at("lattice"), "lattice");
        reject_unknown(l, "lattice", {"N", "h", "models"});
        cfg.lattice.N = unsigned_or(l, "N", "lattice", cfg.lattice.N);
        cfg.lattice.h = number_or(l, "h", "lattice", cfg.lattice.h);
        cfg.lattice.models = unsigned_or(l, "models", "lattice", cfg.lattice.models);
        if (cfg.lattice.N == 0 || !(cfg.lattice.h > 0.0))
            fail("lattice", "N and h must be positive");
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path, Command command) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError(kOp, "cannot open config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), command, path.parent_path());
}

}  // namespace wscat
