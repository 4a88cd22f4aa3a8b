#include "tqd/cli.hpp"

#include "tqd/errors.hpp"
#include "tqd/format.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tqd::cli {

namespace {

using nlohmann::json;

constexpr double kSpectrumTolerance = 1e-9;
constexpr double kMethodDisagreement = 1e-6;

// Thrown for bad flag combinations that CLI11 cannot express.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ModelFlags {
    std::string model;
    double j1 = 0.0;
    double j = 0.0;
    double b = 0.0;
    CLI::Option* j1_opt = nullptr;
    CLI::Option* b_opt = nullptr;
};

void add_model_flags(CLI::App& cmd, ModelFlags& flags)
{
    cmd.add_option("--model", flags.model, "Hamiltonian family")
        ->required()
        ->check(CLI::IsMember({"spin", "magnetic"}));
    flags.j1_opt = cmd.add_option("--j1", flags.j1, "impurity coupling J1 (spin model)");
    cmd.add_option("--j", flags.j, "bulk coupling J");
    flags.b_opt = cmd.add_option("--b", flags.b, "field on spin 1 (magnetic model)");
}

ModelSpec to_model(const ModelFlags& flags)
{
    for (double v : {flags.j1, flags.j, flags.b}) {
        if (!std::isfinite(v)) {
            throw UsageError("couplings must be finite");
        }
    }
    if (flags.model == "spin") {
        if (flags.b_opt->count() > 0) {
            throw UsageError("--b does not apply to --model spin");
        }
        return SpinImpurityParams{flags.j1, flags.j};
    }
    if (flags.j1_opt->count() > 0) {
        throw UsageError("--j1 does not apply to --model magnetic");
    }
    return MagneticImpurityParams{flags.j, flags.b};
}

void add_format_flag(CLI::App& cmd, std::string& format)
{
    cmd.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

OutputFormat to_format(const std::string& name) { return parse_output_format(name).value_or(OutputFormat::csv); }

Bipartition to_bipartition(const std::string& name)
{
    const auto bip = parse_bipartition(name);
    if (!bip) {
        throw UsageError("unknown bipartition '" + name + "'");
    }
    return *bip;
}

std::vector<std::string> row_columns()
{
    return {"model",
            "j1",
            "j",
            "b",
            "temp",
            "bipartition",
            "mutual_information",
            "classical_correlation",
            "discord",
            "method"};
}

std::vector<Cell> row_cells(const ModelSpec& model, double temp, Bipartition bip, const DiscordResult& r)
{
    Cell j1;
    Cell j;
    Cell b;
    if (const auto* s = std::get_if<SpinImpurityParams>(&model)) {
        j1 = s->j1;
        j = s->j;
    } else {
        const auto& m = std::get<MagneticImpurityParams>(model);
        j = m.j;
        b = m.b;
    }
    return {std::string(model_name(model)),
            j1,
            j,
            b,
            temp,
            std::string(to_string(bip)),
            r.mutual_information,
            r.classical_correlation,
            r.discord,
            std::string(to_string(r.method))};
}

Table rows_table(const std::vector<SweepRow>& rows)
{
    Table table{row_columns(), {}};
    for (const auto& row : rows) {
        table.add_row(row_cells(row.model, row.temperature, row.bipartition, row.result));
    }
    return table;
}

int cmd_spectrum(const ModelFlags& flags, const std::string& format, std::ostream& out, std::ostream& err)
{
    const auto model = to_model(flags);
    const auto numeric = eigvalsh(build_hamiltonian(model));
    const auto analytic = analytic_spectrum(model);

    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        worst = std::max(worst, std::abs(numeric[i] - analytic[i]));
    }
    Table table{{"index", "numeric", "analytic", "abs_deviation", "max_deviation"}, {}};
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        table.add_row({static_cast<double>(i + 1), numeric[i], analytic[i], std::abs(numeric[i] - analytic[i]), worst});
    }
    write_table(out, table, to_format(format));
    if (worst > kSpectrumTolerance) {
        err << "spectrum: numeric and closed-form eigenvalues differ by " << format_number(worst) << '\n';
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_discord(const ModelFlags& flags, double temp, const std::string& bip_name, const std::string& format,
                std::ostream& out, std::ostream& err)
{
    const auto model = to_model(flags);
    if (!(temp >= 0.0) || std::isinf(temp)) {
        throw UsageError("--temp must be a finite non-negative number");
    }
    const auto bip = to_bipartition(bip_name);
    const auto rho = thermal_state(model, Temperature(temp));
    const auto rho_ab = bipartite_state(rho, bip);
    const auto result = discord(rho_ab);

    if (result.method == DiscordMethod::xstate_analytic) {
        const auto numeric = discord(rho_ab, DiscordPolicy::force_numeric);
        if (std::abs(numeric.discord - result.discord) > kMethodDisagreement) {
            err << "discord: closed form " << format_number(result.discord) << " and grid_refined "
                << format_number(numeric.discord) << " disagree\n";
        }
    }
    if (bip != Bipartition::one_vs_rest_1_23) {
        const auto other_side = discord(swap_parties(rho_ab));
        if (std::abs(other_side.discord - result.discord) > kMethodDisagreement) {
            err << "discord: measuring the second qubit instead gives " << format_number(other_side.discord) << '\n';
        }
    }

    Table table{row_columns(), {}};
    table.add_row(row_cells(model, temp, bip, result));
    write_table(out, table, to_format(format));
    return kExitOk;
}

int cmd_figure(int figure, const std::string& panel, const std::string& format, std::ostream& out)
{
    if (figure < 1 || figure > 4) {
        throw UsageError("--figure must be 1, 2, 3 or 4");
    }
    char p = 0;
    if (figure <= 3) {
        if (panel != "a" && panel != "b") {
            throw UsageError("figures 1-3 need --panel a or --panel b");
        }
        p = panel[0];
    } else if (!panel.empty()) {
        throw UsageError("figure 4 has no panels");
    }
    write_table(out, rows_table(run_sweep(figure_spec(figure, p))), to_format(format));
    return kExitOk;
}

struct FitFlags {
    double j = 0.0;
    std::string branch;
    std::string bipartition = "pair_12";
    double tmin = 1.0;
    double tmax = 10.0;
    std::size_t tpoints = 19;
    double threshold = 1e-6;
    std::string gap_reference = "plateau";
};

int cmd_fit(const FitFlags& flags, const std::string& format, std::ostream& out, std::ostream& err)
{
    if (!(flags.tmin > 0.0) || !(flags.tmax > flags.tmin) || !std::isfinite(flags.tmax) || flags.tpoints < 2) {
        throw UsageError("need 0 < --tmin < --tmax and --tpoints >= 2");
    }
    if (!(flags.threshold > 0.0)) {
        throw UsageError("--threshold must be positive");
    }
    if (!std::isfinite(flags.j)) {
        throw UsageError("--j must be finite");
    }
    const Branch branch = flags.branch == "j1_positive" ? Branch::j1_positive : Branch::j1_negative;
    CriticalSearchOptions options;
    options.bipartition = to_bipartition(flags.bipartition);
    options.threshold = flags.threshold;
    options.reference = flags.gap_reference == "local" ? GapReference::local : GapReference::plateau;

    const auto temps = linspace(flags.tmin, flags.tmax, flags.tpoints);
    const auto fit = fit_critical_line(flags.j, branch, temps, options);
    if (!fit.gap_monotone) {
        err << "fit: the gap was not monotone along the outward search for at least one temperature\n";
    }

    Table table{{"j", "branch", "bipartition", "gap_reference", "record", "temp", "j1c", "slope", "intercept",
                 "rms_residual"},
                {}};
    const std::string branch_name(to_string(branch));
    const std::string bip_name(to_string(options.bipartition));
    const std::string ref_name(to_string(options.reference));
    for (std::size_t i = 0; i < temps.size(); ++i) {
        table.add_row({flags.j, branch_name, bip_name, ref_name, std::string("sample"), fit.sample_temperatures[i],
                       fit.critical_couplings[i], Cell{}, Cell{}, Cell{}});
    }
    table.add_row({flags.j, branch_name, bip_name, ref_name, std::string("fit"), Cell{}, Cell{}, fit.slope,
                   fit.intercept, fit.rms_residual});
    write_table(out, table, to_format(format));
    return kExitOk;
}

int cmd_sweep(const std::string& spec_path, const std::string& format, std::ostream& out)
{
    std::ifstream in(spec_path);
    if (!in) {
        throw UsageError("cannot read spec file '" + spec_path + "'");
    }
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    write_table(out, rows_table(run_sweep(parse_sweep_spec(text))), to_format(format));
    return kExitOk;
}

double json_number(const json& j, const char* what)
{
    if (!j.is_number()) {
        throw std::invalid_argument(std::string("sweep spec: '") + what + "' must be a number");
    }
    return j.get<double>();
}

} // namespace

SweepSpec parse_sweep_spec(const std::string& json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("sweep spec: ") + e.what());
    }
    if (!doc.is_object()) {
        throw std::invalid_argument("sweep spec: top level must be an object");
    }
    SweepSpec spec;
    const auto model = doc.value("model", std::string{});
    if (model == "spin") {
        spec.family = ModelFamily::spin;
    } else if (model == "magnetic") {
        spec.family = ModelFamily::magnetic;
    } else {
        throw std::invalid_argument("sweep spec: 'model' must be \"spin\" or \"magnetic\"");
    }

    if (!doc.contains("swept") || !doc["swept"].is_object()) {
        throw std::invalid_argument("sweep spec: missing 'swept' object");
    }
    const auto& swept = doc["swept"];
    const auto name = swept.value("parameter", std::string{});
    if (name == "j1") {
        spec.swept.parameter = SweptParameter::j1;
    } else if (name == "j") {
        spec.swept.parameter = SweptParameter::j;
    } else if (name == "b") {
        spec.swept.parameter = SweptParameter::b;
    } else {
        throw std::invalid_argument("sweep spec: swept.parameter must be j1, j or b");
    }
    spec.swept.from = json_number(swept.value("from", json{}), "swept.from");
    spec.swept.to = json_number(swept.value("to", json{}), "swept.to");
    const auto points = swept.value("points", json{});
    if (!points.is_number_unsigned()) {
        throw std::invalid_argument("sweep spec: swept.points must be a non-negative integer");
    }
    spec.swept.points = points.get<std::size_t>();

    if (doc.contains("fixed")) {
        const auto& fixed = doc["fixed"];
        if (!fixed.is_object()) {
            throw std::invalid_argument("sweep spec: 'fixed' must be an object");
        }
        for (const auto& [key, value] : fixed.items()) {
            if (key == name) {
                throw std::invalid_argument("sweep spec: '" + key + "' is both swept and fixed");
            }
            const bool valid = (key == "j") || (key == "j1" && spec.family == ModelFamily::spin) ||
                               (key == "b" && spec.family == ModelFamily::magnetic);
            if (!valid) {
                throw std::invalid_argument("sweep spec: fixed parameter '" + key + "' does not apply to " + model);
            }
            const double v = json_number(value, key.c_str());
            (key == "j" ? spec.j : key == "j1" ? spec.j1 : spec.b) = v;
        }
    }

    if (!doc.contains("temperatures") || !doc["temperatures"].is_array()) {
        throw std::invalid_argument("sweep spec: 'temperatures' must be an array");
    }
    for (const auto& t : doc["temperatures"]) {
        spec.temperatures.push_back(json_number(t, "temperatures[]"));
    }
    if (!doc.contains("bipartitions") || !doc["bipartitions"].is_array()) {
        throw std::invalid_argument("sweep spec: 'bipartitions' must be an array");
    }
    for (const auto& b : doc["bipartitions"]) {
        if (!b.is_string()) {
            throw std::invalid_argument("sweep spec: bipartitions must be strings");
        }
        const auto bip = parse_bipartition(b.get<std::string>());
        if (!bip) {
            throw std::invalid_argument("sweep spec: unknown bipartition '" + b.get<std::string>() + "'");
        }
        spec.bipartitions.push_back(*bip);
    }
    validate(spec);
    return spec;
}

SweepSpec figure_spec(int figure, char panel)
{
    SweepSpec spec;
    if (figure == 4) {
        spec.family = ModelFamily::magnetic;
        spec.swept = {SweptParameter::b, 0.0, 20.0, 401};
        spec.j = 1.0;
        spec.temperatures = {0.25};
        spec.bipartitions = {Bipartition::pair_12, Bipartition::pair_23};
        return spec;
    }
    if (figure < 1 || figure > 4 || (panel != 'a' && panel != 'b')) {
        throw std::invalid_argument("figure_spec: unknown figure or panel");
    }
    spec.family = ModelFamily::spin;
    spec.swept = {SweptParameter::j1, -12.0, 8.0, 401};
    spec.j = panel == 'a' ? 1.0 : -1.0;
    spec.temperatures = {0.5, 1.0, 1.5};
    static constexpr Bipartition by_figure[] = {Bipartition::pair_12, Bipartition::pair_23,
                                                Bipartition::one_vs_rest_1_23};
    spec.bipartitions = {by_figure[figure - 1]};
    return spec;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Thermal quantum discord of three-qubit Heisenberg rings with an impurity", "tqd"};
    app.require_subcommand(1);

    std::string format = "csv";

    ModelFlags spectrum_model;
    auto* spectrum = app.add_subcommand("spectrum", "numeric vs closed-form eigenvalues");
    add_model_flags(*spectrum, spectrum_model);
    add_format_flag(*spectrum, format);

    ModelFlags discord_model;
    double temp = 0.0;
    std::string bip_name = "pair_12";
    auto* discord_cmd = app.add_subcommand("discord", "discord of one thermal state");
    add_model_flags(*discord_cmd, discord_model);
    discord_cmd->add_option("--temp", temp, "temperature (k_B = 1)");
    discord_cmd->add_option("--bipartition", bip_name, "pair_12, pair_23, pair_13 or one_vs_rest_1_23");
    add_format_flag(*discord_cmd, format);

    int figure = 0;
    std::string panel;
    auto* figure_cmd = app.add_subcommand("figure", "dataset behind one of the four discord figures");
    figure_cmd->add_option("--figure", figure, "1, 2, 3 or 4")->required();
    figure_cmd->add_option("--panel", panel, "a (J = 1) or b (J = -1), figures 1-3");
    add_format_flag(*figure_cmd, format);

    FitFlags fit_flags;
    auto* fit = app.add_subcommand("fit", "critical-coupling line J1c(T) = slope*T + intercept");
    fit->add_option("--j", fit_flags.j, "bulk coupling J")->required();
    fit->add_option("--branch", fit_flags.branch, "j1_positive or j1_negative")
        ->required()
        ->check(CLI::IsMember({"j1_positive", "j1_negative"}));
    fit->add_option("--bipartition", fit_flags.bipartition, "bipartition whose discord is tracked");
    fit->add_option("--tmin", fit_flags.tmin, "lowest sampled temperature");
    fit->add_option("--tmax", fit_flags.tmax, "highest sampled temperature");
    fit->add_option("--tpoints", fit_flags.tpoints, "number of temperatures");
    fit->add_option("--threshold", fit_flags.threshold, "gap threshold");
    fit->add_option("--gap-reference", fit_flags.gap_reference, "plateau or local")
        ->check(CLI::IsMember({"plateau", "local"}));
    add_format_flag(*fit, format);

    std::string spec_path;
    auto* sweep = app.add_subcommand("sweep", "run a sweep described by a JSON file");
    sweep->add_option("--spec", spec_path, "JSON sweep description")->required();
    add_format_flag(*sweep, format);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "tqd: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (spectrum->parsed()) {
            return cmd_spectrum(spectrum_model, format, out, err);
        }
        if (discord_cmd->parsed()) {
            return cmd_discord(discord_model, temp, bip_name, format, out, err);
        }
        if (figure_cmd->parsed()) {
            return cmd_figure(figure, panel, format, out);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_flags, format, out, err);
        }
        if (sweep->parsed()) {
            return cmd_sweep(spec_path, format, out);
        }
    } catch (const Error& e) {
        err << "tqd: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "tqd: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "tqd: " << e.what() << '\n';
        return kExitNumerical;
    }
    err << "tqd: no command given\n";
    return kExitUsage;
}

} // namespace tqd::cli
