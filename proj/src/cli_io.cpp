// SPDX-License-Identifier: Apache-2.0

#include "pinching/cli_io.hpp"
#include "pinching/placement.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pinching
{

namespace
{

using json = nlohmann::json;

std::string fmt9(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double number_at(const json &j, const std::string &key)
{
    if (!j.is_number())
        throw ConfigError("config key '" + key + "': expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw ConfigError("config key '" + key + "': must be finite");
    return v;
}

std::uint64_t count_at(const json &j, const std::string &key)
{
    if (j.is_number_unsigned())
        return j.get<std::uint64_t>();
    if (j.is_number_integer())
        throw ConfigError("config key '" + key + "': must be non-negative");
    throw ConfigError("config key '" + key + "': expected a non-negative integer");
}

std::string string_at(const json &j, const std::string &key)
{
    if (!j.is_string())
        throw ConfigError("config key '" + key + "': expected a string");
    return j.get<std::string>();
}

double parse_number(std::string_view text, std::string_view what)
{
    std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try
    {
        v = std::stod(s, &used);
    }
    catch (const std::exception &)
    {
        throw ConfigError(std::string(what) + ": '" + s + "' is not a number");
    }
    if (used != s.size() || !std::isfinite(v))
        throw ConfigError(std::string(what) + ": '" + s + "' is not a number");
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true)
    {
        const std::size_t pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

std::vector<Scheme> parse_scheme_list(std::span<const std::string> names, const std::string &key)
{
    std::vector<Scheme> out;
    for (const auto &n : names)
    {
        try
        {
            out.push_back(parse_scheme(n));
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }
    if (out.empty())
        throw ConfigError("config key '" + key + "': at least one scheme is required");
    return out;
}

} // namespace

SystemParams RunConfig::system_params() const
{
    SystemParams p;
    p.carrier_frequency_hz = f_c;
    p.refractive_index = n_eff;
    p.waveguide_height_m = d;
    p.area_x_m = D_x;
    p.area_y_m = D_y;
    p.waveguide_length_m = L.value_or(D_x);
    p.num_antennas = N;
    p.num_users = K;
    p.p_max_w = dbm_to_watts(p_max_dbm);
    p.p_fixed_w = dbm_to_watts(p_f_dbm);
    p.noise_power_w = dbm_to_watts(sigma2_dbm);
    p.r_min = R_min;
    try
    {
        p.min_spacing_m = delta_min.value_or(0.5 * derive_constants(f_c, n_eff).wavelength);
        p.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    return p;
}

RunConfig parse_config(std::string_view json_text)
{
    json doc;
    try
    {
        doc = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig cfg;
    if (doc.is_null())
        return cfg; // empty document
    if (!doc.is_object())
        throw ConfigError("config must be a JSON object");

    for (const auto &[key, value] : doc.items())
    {
        if (key == "f_c")
            cfg.f_c = number_at(value, key);
        else if (key == "n_eff")
            cfg.n_eff = number_at(value, key);
        else if (key == "d")
            cfg.d = number_at(value, key);
        else if (key == "L")
            cfg.L = number_at(value, key);
        else if (key == "D_x")
            cfg.D_x = number_at(value, key);
        else if (key == "D_y")
            cfg.D_y = number_at(value, key);
        else if (key == "N")
            cfg.N = count_at(value, key);
        else if (key == "K")
            cfg.K = count_at(value, key);
        else if (key == "p_max_dbm")
            cfg.p_max_dbm = number_at(value, key);
        else if (key == "p_f_dbm")
            cfg.p_f_dbm = number_at(value, key);
        else if (key == "sigma2_dbm")
            cfg.sigma2_dbm = number_at(value, key);
        else if (key == "R_min")
            cfg.R_min = number_at(value, key);
        else if (key == "delta_min")
            cfg.delta_min = number_at(value, key);
        else if (key == "schemes")
        {
            if (!value.is_array())
                throw ConfigError("config key 'schemes': expected an array of scheme names");
            std::vector<std::string> names;
            for (const auto &v : value)
                names.push_back(string_at(v, key));
            cfg.schemes = parse_scheme_list(names, key);
        }
        else if (key == "axis")
        {
            try
            {
                cfg.axis = parse_axis(string_at(value, key));
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError("config key 'axis': " + std::string(e.what()));
            }
        }
        else if (key == "values")
        {
            if (value.is_string())
                cfg.values = parse_grid(value.get<std::string>());
            else if (value.is_array())
            {
                cfg.values.clear();
                for (const auto &v : value)
                    cfg.values.push_back(number_at(v, key));
            }
            else
                throw ConfigError("config key 'values': expected an array or a grid string");
        }
        else if (key == "n_trials")
        {
            cfg.n_trials = count_at(value, key);
            if (cfg.n_trials == 0)
                throw ConfigError("config key 'n_trials': must be at least 1");
        }
        else if (key == "master_seed")
            cfg.master_seed = count_at(value, key);
        else if (key == "policy")
        {
            try
            {
                cfg.policy = parse_policy(string_at(value, key));
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError("config key 'policy': " + std::string(e.what()));
            }
        }
        else if (key == "output")
            cfg.output = string_at(value, key);
        else
            throw ConfigError("unknown config key '" + key + "'");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read config file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos)
        return RunConfig{};
    return parse_config(text);
}

std::vector<double> parse_grid(std::string_view text)
{
    if (text.empty())
        throw ConfigError("value grid is empty");

    if (text.find(':') != std::string_view::npos)
    {
        const auto parts = split(text, ':');
        if (parts.size() != 3)
            throw ConfigError("value grid '" + std::string(text) + "': expected start:step:stop");
        const double start = parse_number(parts[0], "grid start");
        const double step = parse_number(parts[1], "grid step");
        const double stop = parse_number(parts[2], "grid stop");
        if (!(step > 0.0) || stop < start)
            throw ConfigError("value grid '" + std::string(text) + "': need step > 0 and stop >= start");

        std::vector<double> out;
        const double slack = 1e-9 * step;
        for (std::size_t i = 0;; ++i)
        {
            double v = start + static_cast<double>(i) * step;
            if (v > stop + slack)
                break;
            if (std::abs(v - stop) <= slack)
                v = stop;
            out.push_back(v);
        }
        return out;
    }

    std::vector<double> out;
    for (auto part : split(text, ','))
        out.push_back(parse_number(part, "grid value"));
    return out;
}

std::string format_csv(const SweepResult &sweep)
{
    std::string out = "axis,value,scheme,mean_ee,stderr_ee,feasibility_rate,n_trials,seed\n";
    const std::string axis(axis_name(sweep.axis));
    for (std::size_t v = 0; v < sweep.values.size(); ++v)
    {
        for (const auto &s : sweep.points[v])
        {
            out += axis;
            out += ',' + fmt9(sweep.values[v]);
            out += ',' + std::string(scheme_name(s.scheme));
            out += ',' + (s.mean_ee ? fmt9(*s.mean_ee) : std::string());
            out += ',' + fmt9(s.stderr_ee);
            out += ',' + fmt9(s.feasibility_rate);
            out += ',' + std::to_string(s.n_trials);
            out += ',' + std::to_string(sweep.master_seed);
            out += '\n';
        }
    }
    return out;
}

void write_csv(const SweepResult &sweep, const std::filesystem::path &path)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw IoError("cannot open '" + path.string() + "' for writing");
    const std::string text = format_csv(sweep);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f)
        throw IoError("failed writing '" + path.string() + "'");
}

std::vector<CsvRow> read_csv(const std::filesystem::path &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot read '" + path.string() + "'");

    const std::string where = "'" + path.string() + "'";
    std::string line;
    if (!std::getline(f, line) || line != "axis,value,scheme,mean_ee,stderr_ee,feasibility_rate,n_trials,seed")
        throw ConfigError(where + ": missing or unexpected CSV header");

    std::vector<CsvRow> rows;
    while (std::getline(f, line))
    {
        if (line.empty())
            continue;
        const auto cells = split(line, ',');
        if (cells.size() != 8)
            throw ConfigError(where + ": malformed row '" + line + "'");
        CsvRow r;
        r.axis = std::string(cells[0]);
        r.value = parse_number(cells[1], where);
        r.scheme = std::string(cells[2]);
        if (!cells[3].empty())
            r.mean_ee = parse_number(cells[3], where);
        r.stderr_ee = parse_number(cells[4], where);
        r.feasibility_rate = parse_number(cells[5], where);
        r.n_trials = static_cast<std::size_t>(parse_number(cells[6], where));
        r.seed = std::stoull(std::string(cells[7]));
        rows.push_back(std::move(r));
    }
    if (rows.empty())
        throw ConfigError(where + ": no data rows");
    return rows;
}

std::vector<FigureSweep> figure_sweeps()
{
    return {
        {"fig2.csv", SweepAxis::p_max_dbm, parse_grid("0:5:30")},
        {"fig3.csv", SweepAxis::r_min, parse_grid("0.25:0.25:1.5")},
        {"fig4.csv", SweepAxis::n_antennas, {1, 2, 4, 8}},
    };
}

namespace
{

struct CommonOptions
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::string> policy;
    std::vector<std::string> schemes;
    std::size_t threads = 0;
};

RunConfig resolve_config(const CommonOptions &opts)
{
    RunConfig cfg = opts.config_path.empty() ? RunConfig{} : load_config(opts.config_path);
    if (opts.seed)
        cfg.master_seed = *opts.seed;
    if (opts.trials)
    {
        if (*opts.trials == 0)
            throw ConfigError("--trials must be at least 1");
        cfg.n_trials = *opts.trials;
    }
    if (opts.policy)
    {
        try
        {
            cfg.policy = parse_policy(*opts.policy);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("--policy: ") + e.what());
        }
    }
    if (!opts.schemes.empty())
        cfg.schemes = parse_scheme_list(opts.schemes, "--schemes");
    return cfg;
}

SweepOptions sweep_options(const RunConfig &cfg, std::size_t threads)
{
    SweepOptions o;
    o.n_trials = cfg.n_trials;
    o.master_seed = cfg.master_seed;
    o.schemes = cfg.schemes;
    o.policy = cfg.policy;
    o.threads = threads;
    return o;
}

int run_solve(const CommonOptions &opts, const std::string &scheme_text, bool as_json, std::ostream &out,
              std::ostream &err)
{
    const RunConfig cfg = resolve_config(opts);
    Scheme scheme;
    try
    {
        scheme = parse_scheme(scheme_text);
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("--scheme: ") + e.what());
    }

    Scenario scenario{cfg.system_params(), {}};
    scenario.users = sample_users(trial_seed(cfg.master_seed, 0), scenario.params);
    const auto gains = scheme_gains(scheme, scenario);
    const SchemeOutcome outcome = solve_scheme_with_gains(scheme, gains, scenario.params);

    const auto &users = scenario.users;
    if (as_json)
    {
        json j;
        j["scheme"] = scheme_name(scheme);
        j["seed"] = cfg.master_seed;
        j["feasible"] = outcome.allocation.has_value();
        j["tau_mins"] = outcome.feasibility.tau_mins;
        json ju = json::array();
        for (std::size_t k = 0; k < users.size(); ++k)
            ju.push_back({{"x", users[k].x}, {"y", users[k].y}, {"gain", gains[k].value}});
        j["users"] = ju;
        if (outcome.allocation)
        {
            const auto &a = *outcome.allocation;
            j["ee"] = a.ee;
            j["sum_rate"] = a.sum_rate();
            j["total_power_w"] = a.total_power(scenario.params.p_fixed_w);
            j["powers_w"] = a.powers_w;
            j["taus"] = a.taus;
            j["rates"] = a.rates;
            j["trace"] = a.trace;
            j["iterations"] = a.iterations;
            j["converged"] = a.converged;
        }
        if (!outcome.error.empty())
            j["error"] = outcome.error;
        out << j.dump(2) << '\n';
    }
    else
    {
        out << "scheme=" << scheme_name(scheme) << '\n';
        out << "seed=" << cfg.master_seed << '\n';
        out << "feasible=" << (outcome.allocation ? "true" : "false") << '\n';
        for (std::size_t k = 0; k < users.size(); ++k)
        {
            const std::string p = "user." + std::to_string(k) + '.';
            out << p << "x=" << fmt9(users[k].x) << '\n';
            out << p << "y=" << fmt9(users[k].y) << '\n';
            out << p << "gain=" << fmt9(gains[k].value) << '\n';
            out << p << "tau_min=" << fmt9(outcome.feasibility.tau_mins[k]) << '\n';
            if (outcome.allocation)
            {
                out << p << "power_w=" << fmt9(outcome.allocation->powers_w[k]) << '\n';
                out << p << "tau=" << fmt9(outcome.allocation->taus[k]) << '\n';
                out << p << "rate=" << fmt9(outcome.allocation->rates[k]) << '\n';
            }
        }
        if (outcome.allocation)
        {
            const auto &a = *outcome.allocation;
            out << "ee=" << fmt9(a.ee) << '\n';
            out << "sum_rate=" << fmt9(a.sum_rate()) << '\n';
            out << "total_power_w=" << fmt9(a.total_power(scenario.params.p_fixed_w)) << '\n';
            out << "iterations=" << a.iterations << '\n';
            out << "converged=" << (a.converged ? "true" : "false") << '\n';
        }
    }

    if (!outcome.allocation)
    {
        err << "solve: instance infeasible for scheme " << scheme_name(scheme);
        if (!outcome.error.empty())
            err << " (" << outcome.error << ")";
        err << '\n';
        return exit_infeasible;
    }
    return exit_ok;
}

int run_sweep_cmd(const CommonOptions &opts, const std::optional<std::string> &axis_text,
                  const std::optional<std::string> &values_text, const std::optional<std::string> &out_path,
                  std::ostream &out)
{
    RunConfig cfg = resolve_config(opts);
    if (axis_text)
    {
        try
        {
            cfg.axis = parse_axis(*axis_text);
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError(std::string("--axis: ") + e.what());
        }
    }
    if (values_text)
        cfg.values = parse_grid(*values_text);
    if (out_path)
        cfg.output = *out_path;
    if (!cfg.axis)
        throw ConfigError("sweep: no axis given (--axis or config key 'axis')");
    if (cfg.values.empty())
        throw ConfigError("sweep: no axis values given (--values or config key 'values')");

    const SystemParams params = cfg.system_params();
    SweepResult result;
    try
    {
        result = run_sweep(*cfg.axis, cfg.values, params, sweep_options(cfg, opts.threads));
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(std::string("sweep: ") + e.what());
    }

    if (cfg.output.empty() || cfg.output == "-")
        out << format_csv(result);
    else
        write_csv(result, cfg.output);
    return exit_ok;
}

int run_figures(const CommonOptions &opts, const std::string &out_dir, std::ostream &out)
{
    const RunConfig cfg = resolve_config(opts);
    const SystemParams params = cfg.system_params();

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + out_dir + "': " + ec.message());

    for (const auto &fig : figure_sweeps())
    {
        const SweepResult result = run_sweep(fig.axis, fig.values, params, sweep_options(cfg, opts.threads));
        const auto path = std::filesystem::path(out_dir) / fig.file;
        write_csv(result, path);
        out << "wrote " << path.string() << '\n';
    }
    return exit_ok;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Energy-efficient TDMA pinching-antenna resource allocation"};
    app.require_subcommand(1);

    auto add_common = [](CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--config", o.config_path, "JSON config file");
        cmd->add_option("--seed", o.seed, "Master seed (solve: user-drop seed)");
        cmd->add_option("--threads", o.threads, "Worker threads, 0 = all cores");
    };
    auto add_mc = [](CLI::App *cmd, CommonOptions &o)
    {
        cmd->add_option("--trials", o.trials, "Monte Carlo trials per axis value");
        cmd->add_option("--policy", o.policy, "exclude_infeasible | zero_infeasible");
        cmd->add_option("--schemes", o.schemes, "Schemes to evaluate")->delimiter(',');
    };

    CommonOptions solve_opts;
    std::string scheme_text = "prop";
    bool as_json = false;
    auto *solve = app.add_subcommand("solve", "Solve one random user drop");
    add_common(solve, solve_opts);
    solve->add_option("--scheme", scheme_text, "prop | equal_time | max_se | conventional");
    solve->add_flag("--json", as_json, "Print the result as JSON");

    CommonOptions sweep_opts;
    std::optional<std::string> axis_text, values_text, out_path;
    auto *sweep = app.add_subcommand("sweep", "Monte Carlo sweep over one parameter, CSV output");
    add_common(sweep, sweep_opts);
    add_mc(sweep, sweep_opts);
    sweep->add_option("--axis", axis_text, "p_max_dbm | r_min | n_antennas");
    sweep->add_option("--values", values_text, "start:step:stop or comma list");
    sweep->add_option("--out", out_path, "CSV output path ('-' for stdout)");

    CommonOptions fig_opts;
    std::string out_dir = ".";
    auto *figures = app.add_subcommand("figures", "Run the three reference sweeps (fig2/3/4.csv)");
    add_common(figures, fig_opts);
    add_mc(figures, fig_opts);
    figures->add_option("--out-dir", out_dir, "Output directory");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (solve->parsed())
            return run_solve(solve_opts, scheme_text, as_json, out, err);
        if (sweep->parsed())
            return run_sweep_cmd(sweep_opts, axis_text, values_text, out_path, out);
        return run_figures(fig_opts, out_dir, out);
    }
    catch (const IoError &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_io;
    }
    catch (const ConfigError &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const std::invalid_argument &e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

} // namespace pinching
