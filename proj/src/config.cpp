#include "rklfd/config.hpp"

#include <fstream>
#include <sstream>

namespace rklfd {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw ConfigError(path + ": " + what);
}

const json& need(const json& j, const std::string& parent, const char* key)
{
    auto it = j.find(key);
    if (it == j.end()) fail(parent.empty() ? key : parent + "." + key, "missing field");
    return *it;
}

double need_num(const json& j, const std::string& parent, const char* key)
{
    const json& v = need(j, parent, key);
    if (!v.is_number()) fail(parent + "." + key, "expected a number");
    return v.get<double>();
}

double opt_num(const json& j, const char* key, double def)
{
    auto it = j.find(key);
    if (it == j.end()) return def;
    return it->get<double>();
}

int need_int(const json& j, const std::string& parent, const char* key)
{
    const json& v = need(j, parent, key);
    if (!v.is_number_integer()) fail(parent + "." + key, "expected an integer");
    return v.get<int>();
}

std::string need_str(const json& j, const std::string& parent, const char* key)
{
    const json& v = need(j, parent, key);
    if (!v.is_string()) fail(parent + "." + key, "expected a string");
    return v.get<std::string>();
}

} // namespace

void PricingProblem::validate() const
{
    if (version != 1) throw ConfigError("version: unsupported config version");
    try {
        payoff.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("payoff: ") + e.what());
    }
    if (!(time.maturity > 0.0)) throw ConfigError("time.maturity: must be > 0");
    if (time.steps < 1) throw ConfigError("time.steps: must be >= 1");
    if (grid.steps < 2) throw ConfigError("grid.steps: must be >= 2");

    switch (model_type) {
    case ModelType::BlackScholes:
        if (bs.sigma.is_constant() && bs.sigma.constant < 0.0)
            throw ConfigError("model.sigma: must be >= 0");
        if (!grid.x_max) throw ConfigError("grid.x_max: required for the bs model");
        break;
    case ModelType::Uvm:
        try {
            uvm.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("model: ") + e.what());
        }
        if (!grid.x_max) throw ConfigError("grid.x_max: required for the uvm model");
        if (exercise == ExerciseStyle::American)
            throw ConfigError("exercise: american exercise not supported for the uvm model");
        break;
    case ModelType::Heston:
        try {
            heston.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("model: ") + e.what());
        }
        if (grid.v_steps < 2) throw ConfigError("grid.v_steps: must be >= 2");
        if (!(grid.eps_v > 0.0 && grid.eps_v < 0.5))
            throw ConfigError("grid.eps_v: must lie in (0, 0.5)");
        if (scheme.method != Scheme1D::Rkl)
            throw ConfigError("scheme.method: the heston model is priced with the rkl scheme");
        break;
    }
    if (scheme.eps < 0.0) throw ConfigError("scheme.eps: must be >= 0");
    if (scheme.stages != 0 && (scheme.stages < 2 || scheme.stages % 2 == 0))
        throw ConfigError("scheme.stages: must be 0 (auto) or an odd integer >= 3");
    if (!(scheme.psor.omega > 0.0 && scheme.psor.omega < 2.0))
        throw ConfigError("scheme.psor.omega: must lie in (0, 2)");
    if (scheme.method == Scheme1D::Rkl &&
        (scheme.lcp == LcpChoice::BrennanSchwartz || scheme.lcp == LcpChoice::Psor))
        throw ConfigError("scheme.lcp: the rkl scheme uses stage projection, not an implicit LCP solver");
    if (scheme.method != Scheme1D::Rkl && scheme.lcp == LcpChoice::Projection)
        throw ConfigError("scheme.lcp: projection is only available with the rkl scheme");
    if (spots.empty()) throw ConfigError("output.spots: need at least one probe");
}

PricingProblem problem_from_json(const json& j)
{
    PricingProblem p;
    p.version = j.value("version", 1);

    const json& jm = need(j, "", "model");
    const std::string type = need_str(jm, "model", "type");
    if (type == "bs") {
        p.model_type = ModelType::BlackScholes;
        p.bs.sigma = Coefficient(need_num(jm, "model", "sigma"));
        p.bs.r = Coefficient(need_num(jm, "model", "rate"));
        p.bs.mu = Coefficient(opt_num(jm, "drift", p.bs.r.constant));
    } else if (type == "uvm") {
        p.model_type = ModelType::Uvm;
        p.uvm.sigma_min = need_num(jm, "model", "sigma_min");
        p.uvm.sigma_max = need_num(jm, "model", "sigma_max");
        p.uvm.r = need_num(jm, "model", "rate");
        p.uvm.mu = opt_num(jm, "drift", p.uvm.r);
        const std::string obj = jm.value("objective", std::string("worst"));
        if (obj == "worst") p.uvm.objective = UvmObjective::WorstLong;
        else if (obj == "best") p.uvm.objective = UvmObjective::BestLong;
        else fail("model.objective", "expected \"worst\" or \"best\"");
    } else if (type == "heston") {
        p.model_type = ModelType::Heston;
        p.heston.kappa = need_num(jm, "model", "kappa");
        p.heston.theta = need_num(jm, "model", "theta");
        p.heston.sigma = need_num(jm, "model", "sigma_v");
        p.heston.rho = need_num(jm, "model", "rho");
        p.heston.r = need_num(jm, "model", "rate");
        p.heston.q = opt_num(jm, "dividend", 0.0);
        p.heston.v0 = need_num(jm, "model", "v0");
    } else {
        fail("model.type", "expected \"bs\", \"uvm\" or \"heston\"");
    }

    const json& jp = need(j, "", "payoff");
    const std::string kind = need_str(jp, "payoff", "kind");
    if (kind == "put") p.payoff = Payoff::put(need_num(jp, "payoff", "strike"));
    else if (kind == "call") p.payoff = Payoff::call(need_num(jp, "payoff", "strike"));
    else if (kind == "digital-call")
        p.payoff = Payoff::digital_call(need_num(jp, "payoff", "strike"), opt_num(jp, "rebate", 1.0));
    else if (kind == "butterfly")
        p.payoff = Payoff::butterfly(need_num(jp, "payoff", "strike"), need_num(jp, "payoff", "strike2"));
    else fail("payoff.kind", "expected put, call, digital-call or butterfly");

    const std::string ex = j.value("exercise", std::string("european"));
    if (ex == "european") p.exercise = ExerciseStyle::European;
    else if (ex == "american") p.exercise = ExerciseStyle::American;
    else fail("exercise", "expected \"european\" or \"american\"");

    const json& jg = need(j, "", "grid");
    p.grid.x_min = opt_num(jg, "x_min", 0.0);
    if (jg.contains("x_max")) p.grid.x_max = jg.at("x_max").get<double>();
    p.grid.steps = need_int(jg, "grid", "steps");
    p.grid.strike_on_grid = jg.value("strike_on_grid", false);
    p.grid.v_steps = jg.value("v_steps", 0);
    if (jg.contains("v_max")) p.grid.v_max = jg.at("v_max").get<double>();
    p.grid.num_sd = opt_num(jg, "num_sd", 4.0);
    p.grid.eps_v = opt_num(jg, "eps_v", 1e-4);

    const json& jt = need(j, "", "time");
    p.time.maturity = need_num(jt, "time", "maturity");
    p.time.steps = need_int(jt, "time", "steps");

    const json& js = need(j, "", "scheme");
    const std::string method = need_str(js, "scheme", "method");
    if (method == "rkl") p.scheme.method = Scheme1D::Rkl;
    else if (method == "cn") p.scheme.method = Scheme1D::CrankNicolson;
    else if (method == "ran") p.scheme.method = Scheme1D::Rannacher;
    else if (method == "euler") p.scheme.method = Scheme1D::BackwardEuler;
    else fail("scheme.method", "expected rkl, cn, ran or euler");
    p.scheme.eps = opt_num(js, "eps", 0.0);
    p.scheme.stages = js.value("stages", 0);
    const std::string lcp = js.value("lcp", std::string("auto"));
    if (lcp == "auto") p.scheme.lcp = LcpChoice::Auto;
    else if (lcp == "brennan-schwartz") p.scheme.lcp = LcpChoice::BrennanSchwartz;
    else if (lcp == "psor") p.scheme.lcp = LcpChoice::Psor;
    else if (lcp == "projection") p.scheme.lcp = LcpChoice::Projection;
    else if (lcp == "none") p.scheme.lcp = LcpChoice::None;
    else fail("scheme.lcp", "expected auto, brennan-schwartz, psor, projection or none");
    p.scheme.smoothing = js.value("smoothing", false);
    if (js.contains("psor")) {
        const json& jq = js.at("psor");
        p.scheme.psor.omega = opt_num(jq, "omega", 1.3);
        p.scheme.psor.tol = opt_num(jq, "tol", 1e-10);
        p.scheme.psor.max_iterations = jq.value("max_iterations", 10000);
    }

    if (j.contains("output") && j.at("output").contains("spots"))
        p.spots = j.at("output").at("spots").get<std::vector<double>>();

    p.validate();
    return p;
}

json problem_to_json(const PricingProblem& p)
{
    json j;
    j["version"] = p.version;
    json jm;
    switch (p.model_type) {
    case ModelType::BlackScholes:
        jm["type"] = "bs";
        jm["sigma"] = p.bs.sigma.constant;
        jm["rate"] = p.bs.r.constant;
        jm["drift"] = p.bs.mu.constant;
        break;
    case ModelType::Uvm:
        jm["type"] = "uvm";
        jm["sigma_min"] = p.uvm.sigma_min;
        jm["sigma_max"] = p.uvm.sigma_max;
        jm["rate"] = p.uvm.r;
        jm["drift"] = p.uvm.mu;
        jm["objective"] = (p.uvm.objective == UvmObjective::WorstLong) ? "worst" : "best";
        break;
    case ModelType::Heston:
        jm["type"] = "heston";
        jm["kappa"] = p.heston.kappa;
        jm["theta"] = p.heston.theta;
        jm["sigma_v"] = p.heston.sigma;
        jm["rho"] = p.heston.rho;
        jm["rate"] = p.heston.r;
        jm["dividend"] = p.heston.q;
        jm["v0"] = p.heston.v0;
        break;
    }
    j["model"] = jm;

    json jp;
    switch (p.payoff.kind) {
    case PayoffKind::VanillaPut: jp["kind"] = "put"; jp["strike"] = p.payoff.strike; break;
    case PayoffKind::VanillaCall: jp["kind"] = "call"; jp["strike"] = p.payoff.strike; break;
    case PayoffKind::DigitalCall:
        jp["kind"] = "digital-call";
        jp["strike"] = p.payoff.strike;
        jp["rebate"] = p.payoff.rebate;
        break;
    case PayoffKind::Butterfly:
        jp["kind"] = "butterfly";
        jp["strike"] = p.payoff.strike;
        jp["strike2"] = p.payoff.strike2;
        break;
    }
    j["payoff"] = jp;
    j["exercise"] = (p.exercise == ExerciseStyle::American) ? "american" : "european";

    json jg;
    jg["x_min"] = p.grid.x_min;
    if (p.grid.x_max) jg["x_max"] = *p.grid.x_max;
    jg["steps"] = p.grid.steps;
    jg["strike_on_grid"] = p.grid.strike_on_grid;
    if (p.model_type == ModelType::Heston) {
        jg["v_steps"] = p.grid.v_steps;
        if (p.grid.v_max) jg["v_max"] = *p.grid.v_max;
        jg["num_sd"] = p.grid.num_sd;
        jg["eps_v"] = p.grid.eps_v;
    }
    j["grid"] = jg;

    j["time"] = {{"maturity", p.time.maturity}, {"steps", p.time.steps}};

    json js;
    switch (p.scheme.method) {
    case Scheme1D::Rkl: js["method"] = "rkl"; break;
    case Scheme1D::CrankNicolson: js["method"] = "cn"; break;
    case Scheme1D::Rannacher: js["method"] = "ran"; break;
    case Scheme1D::BackwardEuler: js["method"] = "euler"; break;
    }
    js["eps"] = p.scheme.eps;
    js["stages"] = p.scheme.stages;
    switch (p.scheme.lcp) {
    case LcpChoice::Auto: js["lcp"] = "auto"; break;
    case LcpChoice::BrennanSchwartz: js["lcp"] = "brennan-schwartz"; break;
    case LcpChoice::Psor: js["lcp"] = "psor"; break;
    case LcpChoice::Projection: js["lcp"] = "projection"; break;
    case LcpChoice::None: js["lcp"] = "none"; break;
    }
    js["smoothing"] = p.scheme.smoothing;
    js["psor"] = {{"omega", p.scheme.psor.omega},
                  {"tol", p.scheme.psor.tol},
                  {"max_iterations", p.scheme.psor.max_iterations}};
    j["scheme"] = js;

    j["output"] = {{"spots", p.spots}};
    return j;
}

void apply_override(json& j, const std::string& spec)
{
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + spec + "': expected key.path=value");
    const std::string path = spec.substr(0, eq);
    const std::string raw = spec.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw; // plain string
    }

    json* node = &j;
    std::istringstream keys(path);
    std::string key, next;
    if (!std::getline(keys, key, '.'))
        throw ConfigError("override '" + spec + "': empty key path");
    while (std::getline(keys, next, '.')) {
        node = &(*node)[key];
        key = next;
    }
    (*node)[key] = value;
}

PricingProblem load_problem(const std::string& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const std::string& o : overrides) apply_override(j, o);
    return problem_from_json(j);
}

} // namespace rklfd
