#include "rklfd/runners.hpp"
#include "rklfd/stability.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace rklfd;

std::ostream& open_out(std::ofstream& file, const std::string& path)
{
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

int cmd_price(const std::string& config, const std::vector<std::string>& sets,
              const std::string& out_path, const std::string& format)
{
    const PricingProblem p = load_problem(config, sets);
    const PriceRun run = run_price(p);

    nlohmann::json j;
    j["spots"] = run.spots;
    j["prices"] = run.prices;
    j["stages_used"] = run.stages;
    j["dt_explicit"] = run.dt_explicit;
    j["time_s"] = run.time_s;

    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    if (format == "csv") {
        out << "spot,price\n";
        out.precision(12);
        for (std::size_t i = 0; i < run.spots.size(); ++i)
            out << run.spots[i] << ',' << run.prices[i] << '\n';
    } else {
        out << j.dump(2) << '\n';
    }
    return 0;
}

int cmd_converge(const std::string& config, const std::vector<std::string>& sets,
                 int levels, double reference, bool has_reference,
                 const std::string& out_path, const std::string& format)
{
    const PricingProblem p = load_problem(config, sets);
    const auto rows = run_converge(p, levels,
                                   has_reference ? std::optional<double>(reference) : std::nullopt);
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& r : rows) {
            nlohmann::json jr;
            jr["spacesteps"] = r.spacesteps;
            jr["timesteps"] = r.timesteps;
            jr["value"] = r.value;
            if (r.change) jr["change"] = *r.change;
            if (r.ratio) jr["ratio"] = *r.ratio;
            if (r.error) jr["error"] = *r.error;
            jr["time_s"] = r.time_s;
            j.push_back(jr);
        }
        out << j.dump(2) << '\n';
    } else {
        write_convergence_csv(rows, out);
    }
    return 0;
}

int cmd_stability(const std::string& scheme, int stages, double eps,
                  std::vector<double> window, int nx, int ny,
                  const std::string& out_path)
{
    const PolyFamily family = (scheme == "rkc") ? PolyFamily::Chebyshev : PolyFamily::Legendre;
    std::optional<ScanWindow> win;
    if (window.size() == 4) win = ScanWindow{window[0], window[1], window[2], window[3]};
    const StabilityRun run = run_stability(family, stages, eps, win, nx, ny);
    if (!out_path.empty()) write_region_csv(run.scan, out_path);
    std::cout << stability_stats_json(run) << '\n';
    return 0;
}

int cmd_gamma(const std::string& config, const std::vector<std::string>& sets,
              const std::string& out_path)
{
    const PricingProblem p = load_problem(config, sets);
    const auto rows = run_gamma(p);
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    write_gamma_csv(rows, out);
    return 0;
}

int cmd_cmp_digital(int stages, double step, const std::string& out_path)
{
    const CmpDigitalTable t = run_cmp_digital(stages, step);
    std::ofstream file;
    std::ostream& out = open_out(file, out_path);
    write_cmp_digital_csv(t, out);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-difference option pricing with the Runge-Kutta-Legendre scheme"};
    app.require_subcommand(1);

    std::string config, out_path, format = "json";
    std::vector<std::string> sets;

    auto* price = app.add_subcommand("price", "Price one configured problem");
    price->add_option("--config", config, "problem config (JSON)")->required();
    price->add_option("--set", sets, "override, key.path=value");
    price->add_option("--out", out_path, "output file (default stdout)");
    price->add_option("--format", format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    int levels = 5;
    double reference = 0.0;
    auto* conv = app.add_subcommand("converge", "Grid-doubling convergence table");
    conv->add_option("--config", config, "problem config (JSON)")->required();
    conv->add_option("--set", sets, "override, key.path=value");
    conv->add_option("--levels", levels, "ladder levels");
    auto* ref_opt = conv->add_option("--reference", reference, "reference value for the error column");
    conv->add_option("--out", out_path, "output file (default stdout)");
    std::string conv_format = "csv";
    conv->add_option("--format", conv_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

    std::string scheme = "rkl";
    int stages = 21, nx = 2000, ny = 1000;
    double eps = 0.0;
    std::vector<double> window;
    auto* stab = app.add_subcommand("stability", "Stability-region scan and statistics");
    stab->add_option("--scheme", scheme, "rkl|rkc")->check(CLI::IsMember({"rkl", "rkc"}));
    stab->add_option("--stages", stages, "stage count s");
    stab->add_option("--eps", eps, "damping shift");
    stab->add_option("--window", window, "re_min re_max im_min im_max")->expected(4);
    stab->add_option("--nx", nx, "raster columns");
    stab->add_option("--ny", ny, "raster rows");
    stab->add_option("--out", out_path, "raster CSV path (stats go to stdout)");

    auto* gam = app.add_subcommand("gamma", "Value/delta/gamma profile at t0");
    gam->add_option("--config", config, "problem config (JSON)")->required();
    gam->add_option("--set", sets, "override, key.path=value");
    gam->add_option("--out", out_path, "output file (default stdout)");

    int cmp_stages = 111;
    double cmp_step = 0.01;
    auto* cmp = app.add_subcommand("cmp-digital", "One-step digital option experiment");
    cmp->add_option("--stages", cmp_stages, "stage count for all schemes");
    cmp->add_option("--step", cmp_step, "time-step size");
    cmp->add_option("--out", out_path, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (price->parsed()) return cmd_price(config, sets, out_path, format);
        if (conv->parsed())
            return cmd_converge(config, sets, levels, reference, ref_opt->count() > 0,
                                out_path, conv_format);
        if (stab->parsed()) return cmd_stability(scheme, stages, eps, window, nx, ny, out_path);
        if (gam->parsed()) return cmd_gamma(config, sets, out_path);
        if (cmp->parsed()) return cmd_cmp_digital(cmp_stages, cmp_step, out_path);
    } catch (const rklfd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
