#pragma once

#include "rklfd/heston.hpp"
#include "rklfd/lcp.hpp"
#include "rklfd/payoff.hpp"
#include "rklfd/uvm.hpp"

#include <optional>
#include <string>
#include <vector>

// vendored nlohmann/json
#include "json.hpp"

namespace rklfd {

/// Raised on malformed or inconsistent problem configs; the CLI maps it to
/// exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class ModelType { BlackScholes, Uvm, Heston };
enum class ExerciseStyle { European, American };
enum class LcpChoice { Auto, BrennanSchwartz, Psor, Projection, None };

/// Scheme selection: time-stepper, damping shift, LCP strategy, smoothing.
struct SchemeSelector {
    Scheme1D method = Scheme1D::Rkl;
    double eps = 0.0;
    int stages = 0; // 0 = automatic from the stability bound
    LcpChoice lcp = LcpChoice::Auto;
    bool smoothing = false;
    PsorConfig psor;
};

/// Grid block: 1D bounds/steps plus the variance axis for Heston.
struct GridSpec {
    double x_min = 0.0;
    std::optional<double> x_max; // defaulted from domain bounds (heston only)
    int steps = 0;
    bool strike_on_grid = false;
    int v_steps = 0;                 // heston
    std::optional<double> v_max;     // heston; defaulted from the quantile bound
    double num_sd = 4.0;             // heston x-domain width when x_max absent
    double eps_v = 1e-4;             // heston v_max tail mass
};

struct TimeSpec {
    double maturity = 0.0;
    int steps = 0;
};

/// Full problem description, loadable from JSON (schema v1).
struct PricingProblem {
    int version = 1;
    ModelType model_type = ModelType::BlackScholes;
    BSModel bs;           // valid when model_type == BlackScholes
    UvmModel uvm;         // valid when model_type == Uvm
    HestonModel heston;   // valid when model_type == Heston
    Payoff payoff;
    ExerciseStyle exercise = ExerciseStyle::European;
    GridSpec grid;
    TimeSpec time;
    SchemeSelector scheme;
    std::vector<double> spots;

    void validate() const;
};

PricingProblem problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const PricingProblem& p);

PricingProblem load_problem(const std::string& path,
                            const std::vector<std::string>& overrides = {});

/// Applies a "dotted.path=value" override to a JSON document; the value is
/// parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& j, const std::string& spec);

} // namespace rklfd
