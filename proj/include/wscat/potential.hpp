#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace wscat {

struct ZeroPotential {};

struct SquareBarrier {
    double height = 0.0;
    double half_width = 0.0;
    double center = 0.0;
};

// V(x) = -nu (nu + 1) sech^2(x); reflectionless for integer nu.
struct PoschlTeller {
    int nu = 1;
};

struct GaussianBump {
    double amplitude = 0.0;
    double sigma = 1.0;
    double center = 0.0;
};

// left_value on x < 0, right_value on x >= 0.
struct StepPotential {
    double left_value = 0.0;
    double right_value = 0.0;
};

// Linear interpolation between nodes, tail values outside [xs.front(), xs.back()].
struct SampledPotential {
    std::vector<double> xs;
    std::vector<double> vs;
    double tail_left = 0.0;
    double tail_right = 0.0;
};

using PotentialKind = std::variant<ZeroPotential, SquareBarrier, PoschlTeller,
                                   GaussianBump, StepPotential, SampledPotential>;

inline constexpr double kInfiniteSupport = std::numeric_limits<double>::infinity();

enum class TailClass {
    Constant,  // V equals its tail value outside a finite interval
    Decaying,  // V approaches its tail value only asymptotically
};

struct ValidationReport {
    bool valid = true;
    double lower_bound = 0.0;
    TailClass tails = TailClass::Constant;
    bool limit_point_left = true;
    bool limit_point_right = true;
    std::vector<std::string> violations;
};

// Lists every violated invariant without throwing.
ValidationReport inspect(const PotentialKind& kind);

// Same as inspect(), but throws InvalidPotential naming the first violation.
ValidationReport validate(const PotentialKind& kind);

// An immutable, validated potential. Optionally truncated: outside
// [-cutoff, cutoff] it is replaced by its tail values.
class Potential {
public:
    Potential();
    explicit Potential(PotentialKind kind);

    const PotentialKind& kind() const noexcept { return kind_; }
    std::optional<double> cutoff() const noexcept { return cutoff_; }

    double operator()(double x) const;

    double tail_left() const noexcept;
    double tail_right() const noexcept;
    double lower_bound() const noexcept { return lower_bound_; }

    // Smallest X with V constant outside [-X, X]; kInfiniteSupport if none.
    double support_radius() const noexcept;
    bool has_compact_support() const noexcept { return support_radius() < kInfiniteSupport; }
    bool has_zero_tails() const noexcept { return tail_left() == 0.0 && tail_right() == 0.0; }

    // Points where V or V' may jump; solvers split their integration there.
    std::vector<double> breakpoints() const;

    // Copy with V set to its tail values for |x| > effective_support(*this, tol).
    Potential truncated(double tol) const;

    std::string describe() const;

private:
    PotentialKind kind_;
    std::optional<double> cutoff_;
    double lower_bound_ = 0.0;
};

double evaluate(const Potential& p, double x);

// Smallest X such that |V(x) - tail| <= tol for all |x| >= X.
double effective_support(const Potential& p, double tol);

ValidationReport validate(const Potential& p);

}  // namespace wscat
