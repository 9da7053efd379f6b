#include "sedgkit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <functional>
#include <cmath>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sedgkit/catalog.hpp"
#include "sedgkit/csv.hpp"
#include "sedgkit/diagnostics.hpp"
#include "sedgkit/errors.hpp"
#include "sedgkit/harness.hpp"

namespace sedgkit::cli {

namespace {

using nlohmann::json;

/// --config reader: a flat JSON object whose keys are flag names (dashes or
/// underscores). Arrays become comma lists, objects become k=v lists.
class JsonConfig : public CLI::Config {
public:
    /// Keys are routed to `subcommand`; CLI11 only reads config files at the top level.
    explicit JsonConfig(std::string subcommand) : subcommand_(std::move(subcommand)) {}

    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) {
                continue;
            }
            const std::string& name = opt->get_lnames().front();
            if (opt->count() > 0) {
                j[name] = opt->as<std::string>();
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        return j.dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::parse_error& e) {
            throw CLI::ConfigError(std::string("config: ") + e.what());
        }
        if (!j.is_object()) {
            throw CLI::ConfigError("config: top level must be a JSON object");
        }
        std::vector<CLI::ConfigItem> items;
        for (const auto& [key, value] : j.items()) {
            CLI::ConfigItem item;
            item.name = key;
            std::replace(item.name.begin(), item.name.end(), '_', '-');
            if (!subcommand_.empty()) {
                item.parents = {subcommand_};
            }
            item.inputs.push_back(scalar_list(value));
            items.push_back(std::move(item));
        }
        return items;
    }

private:
    std::string subcommand_;

    static std::string scalar(const json& v) {
        if (v.is_string()) {
            return v.get<std::string>();
        }
        if (v.is_boolean()) {
            return v.get<bool>() ? "true" : "false";
        }
        if (v.is_number_float()) {
            return format_real(v.get<double>());
        }
        if (v.is_number()) {
            return v.dump();
        }
        throw CLI::ConfigError("config: unsupported value " + v.dump());
    }

    static std::string scalar_list(const json& v) {
        std::string out;
        if (v.is_array()) {
            for (const auto& e : v) {
                out += (out.empty() ? "" : ",") + (e.is_array() ? nested(e) : scalar(e));
            }
            return out;
        }
        if (v.is_object()) {
            for (const auto& [k, e] : v.items()) {
                out += (out.empty() ? "" : ",") + k + "=" + scalar(e);
            }
            return out;
        }
        return scalar(v);
    }

    // [[-1,0],[0,1]] -> "-1,0;0,1"
    static std::string nested(const json& v) {
        std::string out;
        for (const auto& e : v) {
            out += (out.empty() ? "" : ",") + scalar(e);
        }
        return out;
    }
};

std::vector<double> parse_reals(const std::string& text, char sep, const std::string& what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(sep, pos), text.size());
        std::string item = text.substr(pos, end - pos);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        double v = 0.0;
        const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc() || p != item.data() + item.size() || !std::isfinite(v)) {
            throw InvalidArgument(what + ": cannot parse '" + text + "'");
        }
        out.push_back(v);
        pos = end + 1;
    }
    return out;
}

Vec to_vec(const std::vector<double>& v) {
    if (v.empty() || v.size() > static_cast<std::size_t>(kMaxStateDim)) {
        throw InvalidArgument("state vector must have between 1 and 8 entries");
    }
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[static_cast<Eigen::Index>(i)] = v[i];
    }
    return out;
}

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) {
            throw InvalidArgument("empty entry in list '" + text + "'");
        }
        out.push_back(item);
    }
    if (out.empty()) {
        throw InvalidArgument("empty list");
    }
    return out;
}

/// Flags shared by every subcommand.
struct Common {
    std::string model;
    std::string scheme;
    std::string params;
    std::string x0;
    std::string out;
    std::uint64_t seed = 0;
    std::optional<double> truncate_k;
    bool no_truncate = false;
    unsigned threads = 0;

    void add(CLI::App* sub) {
        sub->add_option("--model", model, "Model name")->capture_default_str();
        sub->add_option("--scheme", scheme, "Scheme name")->capture_default_str();
        sub->add_option("--params", params, "Model parameters, k=v,k=v");
        sub->add_option("--seed", seed, "Base seed for the Wiener increments")->capture_default_str();
        sub->add_option("--x0", x0, "Initial state, comma separated (model default if omitted)");
        sub->add_option("--out", out, "Output CSV path (stdout if omitted)");
        sub->add_option("--truncate-k", truncate_k, "Clip increments at sqrt(2k|ln h|)");
        sub->add_flag("--no-truncate", no_truncate, "Never clip increments");
        sub->add_option("--threads", threads, "Worker threads (0: SEDGKIT_THREADS or all cores)");
    }

    std::optional<TruncationPolicy> truncation() const {
        if (no_truncate && truncate_k) {
            throw InvalidArgument("--truncate-k and --no-truncate are mutually exclusive");
        }
        if (no_truncate) {
            return TruncationPolicy{false, 2.0};
        }
        if (truncate_k) {
            TruncationPolicy p{true, *truncate_k};
            p.validate();
            return p;
        }
        return std::nullopt;
    }

    ExperimentConfig experiment() const {
        ExperimentConfig cfg;
        cfg.model = model;
        cfg.scheme = scheme;
        cfg.params = parse_params(params);
        if (!x0.empty()) {
            cfg.x0 = to_vec(parse_reals(x0, ',', "--x0"));
        }
        cfg.seed = seed;
        cfg.truncation = truncation();
        cfg.threads = threads;
        cfg.output_path = out;
        return cfg;
    }
};

void emit(const CsvReport& report, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        report.write(out);
        return;
    }
    const std::string text = report.str();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw InvalidArgument("cannot open output file '" + path + "'");
    }
    f << text;
    if (!f) {
        throw NumericError("failed writing '" + path + "'");
    }
}

void require_positive(double v, const char* flag) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(flag) + " must be positive and finite");
    }
}

std::string component_name(int i) {
    return "x" + std::to_string(i);
}

int parse_component(const std::string& s) {
    std::string digits = s;
    if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        digits.erase(0, 1);
    }
    int v = 0;
    const auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc() || p != digits.data() + digits.size() || v < 1) {
        throw InvalidArgument("unknown component '" + s + "'");
    }
    return v;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    Common c;
    double h = 0.0;
    double t_end = 0.0;
};

void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    require_positive(a.h, "--h");
    require_positive(a.t_end, "--t-end");
    const ExperimentConfig cfg = a.c.experiment();
    const ModelInstance model = make_model(cfg.model, cfg.params);
    const auto scheme = make_scheme(cfg.scheme, model, cfg.truncation, cfg.fixed_point);
    const Vec x0 = cfg.x0 ? *cfg.x0 : model.default_x0;
    if (x0.size() != model.dim()) {
        throw InvalidArgument("--x0 must have " + std::to_string(model.dim()) + " entries");
    }
    const double ratio = a.t_end / a.h;
    const double n_real = std::round(ratio);
    if (n_real < 1.0 || std::abs(ratio - n_real) > 1e-9 * n_real || n_real > 4294967296.0) {
        throw InvalidArgument("--t-end must be a positive integer multiple of --h");
    }
    const auto n = static_cast<std::size_t>(n_real);
    const int level = std::bit_width(n - 1);
    const IncrementGrid grid = generate(cfg.seed, 0, scheme->noise_count(), level, a.h);
    const Trajectory traj = simulate_path(*scheme, x0, a.h, n, grid.fine);

    std::vector<std::string> header{"t"};
    for (int i = 1; i <= model.dim(); ++i) {
        header.push_back(component_name(i));
    }
    CsvReport report(header);
    for (std::size_t j = 0; j < traj.t.size(); ++j) {
        std::vector<double> row{traj.t[j]};
        for (int i = 0; i < model.dim(); ++i) {
            row.push_back(traj.x[j][i]);
        }
        report.add_row(row);
    }
    emit(report, cfg.output_path, out);
}

struct ConvergenceArgs {
    Common c;
    std::string h_list;
    double t_end = 1.0;
    long long paths = 1000;
    long long refinement = 128;
};

void cmd_convergence(const ConvergenceArgs& a, std::ostream& out) {
    if (a.paths <= 0) {
        throw InvalidArgument("--paths must be positive");
    }
    if (a.refinement <= 0) {
        throw InvalidArgument("--refinement must be positive");
    }
    ExperimentConfig cfg = a.c.experiment();
    cfg.h_list = parse_reals(a.h_list, ',', "--h-list");
    for (double h : cfg.h_list) {
        require_positive(h, "--h-list entries");
    }
    cfg.t_end = a.t_end;
    cfg.paths = static_cast<std::size_t>(a.paths);
    cfg.refinement = static_cast<std::size_t>(a.refinement);
    const ConvergenceTable table = strong_order(cfg);

    CsvReport report({"h", "rms", "stderr"});
    for (const auto& row : table.rows) {
        report.add_row(std::vector<double>{row.h, row.rms, row.std_error});
    }
    report.add_comment("slope=" + format_real(table.slope) + (table.degenerate ? " degenerate" : ""));
    emit(report, cfg.output_path, out);
}

struct StructureArgs {
    Common c;
    std::string mode;
    std::optional<double> h;
    std::optional<double> t_end;
    long long paths = 2000;
    std::string vertices = "-1,0;0,1;1,0";
};

std::function<double(const Vec&)> energy_of(const ModelInstance& model) {
    if (model.poisson) {
        auto p = model.poisson;
        return [p](const Vec& x) { return poisson_energy(*p, x); };
    }
    if (model.langevin) {
        auto l = model.langevin;
        return [l](const Vec& x) {
            const Vec p = x.head(l->dbar);
            const Vec q = x.tail(l->dbar);
            return 0.5 * p.dot(l->M_inv * p) + l->U0.eval(q);
        };
    }
    if (model.omega) {
        const double omega = *model.omega;
        return [omega](const Vec& x) { return oscillator_h1(omega, x); };
    }
    throw UnsupportedOperation("no energy functional for model " + model.name);
}

void cmd_structure(StructureArgs a, std::ostream& out) {
    ExperimentConfig cfg;
    if (a.mode == "energy") {
        if (a.c.model.empty()) a.c.model = "wind_poisson";
        if (a.c.scheme.empty()) a.c.scheme = "sedg_poisson";
        cfg = a.c.experiment();
        cfg.h = a.h.value_or(0.0625);
        cfg.t_end = a.t_end.value_or(50.0);
    } else if (a.mode == "growth") {
        if (a.c.model.empty()) a.c.model = "oscillator";
        if (a.c.scheme.empty()) a.c.scheme = "sedg_oscillator";
        cfg = a.c.experiment();
        cfg.h = a.h.value_or(0.015625);
        cfg.t_end = a.t_end.value_or(5.0);
    } else if (a.mode == "triangle") {
        if (a.c.model.empty()) a.c.model = "damped_oscillator";
        if (a.c.scheme.empty()) a.c.scheme = "sedg_langevin";
        cfg = a.c.experiment();
        cfg.h = a.h.value_or(0.03125);
        cfg.t_end = a.t_end.value_or(5.0);
    } else {
        throw InvalidArgument("--mode must be energy, growth or triangle");
    }
    require_positive(cfg.h, "--h");
    require_positive(cfg.t_end, "--t-end");

    if (a.mode == "growth") {
        if (a.paths <= 0) {
            throw InvalidArgument("--paths must be positive");
        }
        cfg.paths = static_cast<std::size_t>(a.paths);
        const GrowthSeries g = expectation_growth(cfg);
        CsvReport report({"t", "mean_H1", "stderr"});
        for (std::size_t j = 0; j < g.t.size(); ++j) {
            report.add_row(std::vector<double>{g.t[j], g.mean[j], g.std_error[j]});
        }
        emit(report, cfg.output_path, out);
        return;
    }

    const ModelInstance model = make_model(cfg.model, cfg.params);
    const auto scheme = make_scheme(cfg.scheme, model, cfg.truncation, cfg.fixed_point);
    const double ratio = cfg.t_end / cfg.h;
    const double n_real = std::round(ratio);
    if (n_real < 1.0 || std::abs(ratio - n_real) > 1e-9 * n_real || n_real > 4294967296.0) {
        throw InvalidArgument("--t-end must be a positive integer multiple of --h");
    }
    const auto n = static_cast<std::size_t>(n_real);
    const IncrementGrid grid =
        generate(cfg.seed, 0, scheme->noise_count(), std::bit_width(n - 1), cfg.h);

    if (a.mode == "energy") {
        const Vec x0 = cfg.x0 ? *cfg.x0 : model.default_x0;
        if (x0.size() != model.dim()) {
            throw InvalidArgument("--x0 must have " + std::to_string(model.dim()) + " entries");
        }
        const StructureReport r = energy_track(*scheme, energy_of(model), x0, cfg.h, n, grid.fine);
        CsvReport report({"t", "energy", "drift"});
        for (std::size_t j = 0; j < r.size(); ++j) {
            report.add_row(std::vector<double>{r.t[j], r.energy[j], r.energy[j] - r.energy[0]});
        }
        emit(report, cfg.output_path, out);
        return;
    }

    std::array<Vec, 3> verts;
    const auto points = [&] {
        std::vector<std::string> parts;
        std::stringstream ss(a.vertices);
        std::string item;
        while (std::getline(ss, item, ';')) {
            parts.push_back(item);
        }
        return parts;
    }();
    if (points.size() != 3) {
        throw InvalidArgument("--vertices needs three points separated by ';'");
    }
    for (std::size_t i = 0; i < 3; ++i) {
        verts[i] = to_vec(parse_reals(points[i], ',', "--vertices"));
        if (verts[i].size() != 2) {
            throw InvalidArgument("--vertices must be planar points");
        }
    }
    const double nu = model.langevin ? model.langevin->nu : 0.0;
    const StructureReport r = triangle_area_track(*scheme, verts, cfg.h, n, grid.fine, nu);
    CsvReport report({"t", "area", "norm_area"});
    for (std::size_t j = 0; j < r.size(); ++j) {
        report.add_row(std::vector<double>{r.t[j], r.area[j], r.normalized_area[j]});
    }
    emit(report, cfg.output_path, out);
}

struct SweepArgs {
    Common c;
    std::string omegas = "10,20,40,80";
    std::string schemes = "sedg,sem";
    std::string components;
    double h = 0.03125;
    std::optional<double> t_end;
    long long paths = 1000;
    long long refinement = 128;
};

void cmd_sweep(SweepArgs a, std::ostream& out) {
    if (a.c.model.empty()) a.c.model = "nonlinear_oscillator";
    if (a.paths <= 0) {
        throw InvalidArgument("--paths must be positive");
    }
    if (a.refinement <= 0) {
        throw InvalidArgument("--refinement must be positive");
    }
    require_positive(a.h, "--h");
    ExperimentConfig cfg = a.c.experiment();
    cfg.h = a.h;
    cfg.t_end = a.t_end.value_or(a.h);
    cfg.paths = static_cast<std::size_t>(a.paths);
    cfg.refinement = static_cast<std::size_t>(a.refinement);
    if (a.omegas.empty()) {
        throw InvalidArgument("--omegas is empty");
    }
    const std::vector<double> omegas = parse_reals(a.omegas, ',', "--omegas");
    const std::vector<std::string> schemes = split_names(a.schemes);

    const ModelInstance probe = make_model(cfg.model, cfg.params);
    std::vector<int> wanted;
    if (a.components.empty()) {
        for (int i = 1; i <= probe.dim(); ++i) {
            wanted.push_back(i);
        }
    } else {
        for (const auto& s : split_names(a.components)) {
            const int c = parse_component(s);
            if (c > probe.dim()) {
                throw InvalidArgument("unknown component '" + s + "'");
            }
            wanted.push_back(c);
        }
    }
    const auto keep = [&](int c) { return std::find(wanted.begin(), wanted.end(), c) != wanted.end(); };

    const SweepTable table = frequency_sweep(cfg, omegas, schemes);
    CsvReport report({"omega", "scheme", "component", "rms"});
    for (const auto& row : table.rows) {
        if (keep(row.component)) {
            report.add_row({format_real(row.omega), row.scheme, component_name(row.component),
                            format_real(row.rms)});
        }
    }
    for (const auto& s : table.slopes) {
        if (keep(s.component)) {
            report.add_comment("slope " + s.scheme + " " + component_name(s.component) + "=" +
                               format_real(s.slope));
        }
    }
    emit(report, cfg.output_path, out);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stochastic exponential discrete gradient integrators"};
    std::string active;
    for (int i = 1; i < argc; ++i) {
        const std::string_view a = argv[i];
        if (a == "simulate" || a == "convergence" || a == "structure" || a == "sweep") {
            active = a;
            break;
        }
    }
    app.config_formatter(std::make_shared<JsonConfig>(active));
    app.set_config("--config", "", "JSON file with the same keys as the flags");
    app.fallthrough();
    // -h would collide with the --h step-size flag
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    app.set_version_flag("--version", "sedgkit 0.1.0");

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Simulate one trajectory, CSV t,x1..xd");
    sim.c.add(s);
    s->add_option("--h", sim.h, "Step size")->required();
    s->add_option("--t-end", sim.t_end, "Final time")->required();

    ConvergenceArgs conv;
    auto* c = app.add_subcommand("convergence", "Strong-order table, CSV h,rms,stderr");
    conv.c.add(c);
    c->add_option("--h-list", conv.h_list, "Comma separated step sizes")->required();
    c->add_option("--t-end", conv.t_end, "Final time")->capture_default_str();
    c->add_option("--paths", conv.paths, "Monte Carlo paths")->capture_default_str();
    c->add_option("--refinement", conv.refinement, "Reference refinement factor")->capture_default_str();

    StructureArgs st;
    auto* t = app.add_subcommand("structure", "Energy, growth or triangle-area report");
    st.c.add(t);
    t->add_option("--mode", st.mode, "energy | growth | triangle")->required();
    t->add_option("--h", st.h, "Step size");
    t->add_option("--t-end", st.t_end, "Final time");
    t->add_option("--paths", st.paths, "Monte Carlo paths (growth)")->capture_default_str();
    t->add_option("--vertices", st.vertices, "Triangle vertices x,y;x,y;x,y")->capture_default_str();

    SweepArgs sw;
    auto* w = app.add_subcommand("sweep", "Error versus frequency, CSV omega,scheme,component,rms");
    sw.c.add(w);
    w->add_option("--omegas", sw.omegas, "Comma separated frequencies")->capture_default_str();
    w->add_option("--schemes", sw.schemes, "Comma separated schemes")->capture_default_str();
    w->add_option("--components", sw.components, "Components to report, e.g. x1,x2");
    w->add_option("--h", sw.h, "Step size")->capture_default_str();
    w->add_option("--t-end", sw.t_end, "Final time (default: one step)");
    w->add_option("--paths", sw.paths, "Monte Carlo paths")->capture_default_str();
    w->add_option("--refinement", sw.refinement, "Reference refinement factor")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::CallForVersion& e) {
        out << e.what() << '\n';
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "sedgkit: " << e.what() << '\n';
        return kUsageError;
    }

    try {
        if (s->parsed()) {
            if (sim.c.model.empty() || sim.c.scheme.empty()) {
                throw InvalidArgument("simulate needs --model and --scheme");
            }
            cmd_simulate(sim, out);
        } else if (c->parsed()) {
            if (conv.c.model.empty() || conv.c.scheme.empty()) {
                throw InvalidArgument("convergence needs --model and --scheme");
            }
            cmd_convergence(conv, out);
        } else if (t->parsed()) {
            cmd_structure(st, out);
        } else if (w->parsed()) {
            cmd_sweep(sw, out);
        }
    } catch (const InvalidArgument& e) {
        err << "sedgkit: " << e.what() << '\n';
        return kUsageError;
    } catch (const UnsupportedOperation& e) {
        err << "sedgkit: " << e.what() << '\n';
        return kUsageError;
    } catch (const ConvergenceError& e) {
        err << "sedgkit: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const NumericError& e) {
        err << "sedgkit: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        err << "sedgkit: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kSuccess;
}

} // namespace sedgkit::cli
