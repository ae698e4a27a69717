#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uncpdf/uncpdf.h"

namespace
{
using Json = nlohmann::ordered_json;

constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

struct Failure
{
    int exit_code;
    std::string message;
};

void check(unc_status status)
{
    if (status == UNC_OK)
        return;
    bool const usage = status == UNC_ERR_PARSE || status == UNC_ERR_INVALID_ARGUMENT;
    throw Failure{usage ? exit_usage : exit_failure,
                  std::string(unc_status_name(status)) + ": " + unc_last_error()};
}

std::string take(char* s)
{
    std::string out(s ? s : "");
    unc_string_free(s);
    return out;
}

struct ObsDeleter
{
    void operator()(unc_observable* o) const { unc_observable_free(o); }
};
using ObsPtr = std::unique_ptr<unc_observable, ObsDeleter>;

//! Observable flags shared by every subcommand that takes observables
struct ObsFlags
{
    std::vector<std::string> files;
    std::vector<std::string> spectra;
    std::vector<std::string> qubits;
    CLI::Option* file_opt{nullptr};
    CLI::Option* spectrum_opt{nullptr};
    CLI::Option* qubit_opt{nullptr};

    void attach(CLI::App* app)
    {
        file_opt = app->add_option("--obs", files, "Observable JSON file (repeatable)");
        spectrum_opt = app->add_option("--spectrum", spectra,
                                       "Diagonal observable, e.g. 1,3,9 (repeatable)");
        qubit_opt = app->add_option("--qubit", qubits,
                                    "Qubit observable a0,ax,ay,az (repeatable)");
        for (auto* opt : {file_opt, spectrum_opt, qubit_opt})
            opt->allow_extra_args(false);
    }

    //! Observables in command-line order
    std::vector<ObsPtr> load(CLI::App const* app) const
    {
        std::vector<ObsPtr> out;
        std::size_t next_file = 0;
        std::size_t next_spectrum = 0;
        std::size_t next_qubit = 0;
        for (auto const* opt : app->parse_order())
        {
            unc_observable* raw = nullptr;
            if (opt == file_opt)
            {
                check(unc_observable_read_file(files.at(next_file++).c_str(), &raw));
            }
            else if (opt == spectrum_opt)
            {
                auto const& text = spectra.at(next_spectrum++);
                Json const j = {{"spectrum", Json::parse("[" + text + "]", nullptr, false)}};
                if (j["spectrum"].is_discarded())
                    throw Failure{exit_usage, "invalid --spectrum '" + text + "'"};
                check(unc_observable_from_json(j.dump().c_str(), &raw));
            }
            else if (opt == qubit_opt)
            {
                auto const& text = qubits.at(next_qubit++);
                auto const v = Json::parse("[" + text + "]", nullptr, false);
                if (v.is_discarded() || v.size() != 4)
                    throw Failure{exit_usage,
                                  "--qubit needs a0,ax,ay,az, got '" + text + "'"};
                for (auto const& x : v)
                {
                    if (!x.is_number())
                        throw Failure{exit_usage, "invalid --qubit '" + text + "'"};
                }
                check(unc_observable_from_qubit(v[0].get<double>(), v[1].get<double>(),
                                                v[2].get<double>(), v[3].get<double>(),
                                                &raw));
            }
            else
            {
                continue;
            }
            out.emplace_back(raw);
        }
        if (out.empty())
            throw Failure{exit_usage, "no observables given (--obs, --spectrum, --qubit)"};
        return out;
    }
};

std::vector<unc_observable const*> raw(std::vector<ObsPtr> const& obs)
{
    std::vector<unc_observable const*> out;
    for (auto const& o : obs)
        out.push_back(o.get());
    return out;
}

void emit(std::string const& text, std::string const& path)
{
    if (path.empty())
    {
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Failure{exit_failure, "cannot write " + path};
    out << text;
    if (!text.empty() && text.back() != '\n')
        out << '\n';
}

Json csv_to_json(std::string const& csv)
{
    Json j;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    Json cols = Json::array();
    {
        std::istringstream h(line);
        std::string c;
        while (std::getline(h, c, ','))
            cols.push_back(c);
    }
    Json rows = Json::array();
    while (std::getline(in, line))
    {
        Json row = Json::array();
        std::istringstream r(line);
        std::string cell;
        while (std::getline(r, cell, ','))
        {
            char* end = nullptr;
            double const v = std::strtod(cell.c_str(), &end);
            if (end && *end == '\0' && std::isfinite(v))
                row.push_back(v);
            else
                row.push_back(cell);
        }
        rows.push_back(row);
    }
    j["columns"] = cols;
    j["rows"] = rows;
    return j;
}

//---------------------------------------------------------------------------//
// SUBCOMMANDS
//---------------------------------------------------------------------------//
struct PdfArgs
{
    std::string kind;
    std::string grid;
    std::string out;
    std::string format{"csv"};
    ObsFlags obs;
};

int run_pdf(PdfArgs const& a, CLI::App const* app)
{
    auto const obs = a.obs.load(app);
    auto const ptrs = raw(obs);
    char const* grid = a.grid.empty() ? nullptr : a.grid.c_str();

    if (a.kind == "expectation" || a.kind == "uncertainty")
    {
        if (ptrs.size() != 1)
            throw Failure{exit_usage, a.kind + " takes exactly one observable"};
        unc_pdf* pdf = nullptr;
        check(unc_pdf_create(a.kind == "expectation" ? UNC_PDF_EXPECTATION
                                                     : UNC_PDF_UNCERTAINTY,
                             ptrs[0], &pdf));
        std::unique_ptr<unc_pdf, void (*)(unc_pdf*)> guard(pdf, unc_pdf_free);
        char* csv = nullptr;
        check(unc_pdf_grid_csv(pdf, grid, &csv));
        std::string text = take(csv);
        if (a.format == "json")
        {
            Json j = csv_to_json(text);
            j["variant"] = "density";
            text = j.dump(2);
        }
        emit(text, a.out);
        return 0;
    }

    static std::map<std::string, unc_joint_kind> const kinds{
        {"joint-exp", UNC_JOINT_EXPECTATIONS},
        {"joint-unc", UNC_JOINT_UNCERTAINTIES},
        {"exp-exp2", UNC_JOINT_EXP_EXP2},
        {"exp-std", UNC_JOINT_EXP_STD},
    };
    unc_joint* joint = nullptr;
    check(unc_joint_create(kinds.at(a.kind), ptrs.data(), ptrs.size(), &joint));
    std::unique_ptr<unc_joint, void (*)(unc_joint*)> guard(joint, unc_joint_free);
    char const* variant = nullptr;
    check(unc_joint_variant(joint, &variant));

    if (std::string(variant) == "density")
    {
        char* csv = nullptr;
        check(unc_joint_grid_csv(joint, grid, &csv));
        std::string text = take(csv);
        if (a.format == "json")
        {
            Json j = csv_to_json(text);
            j["variant"] = "density";
            text = j.dump(2);
        }
        emit(text, a.out);
        return 0;
    }

    // Singular: JSON description, profile CSV alongside
    bool const line = std::string(variant) == "line_singular";
    std::string profile;
    if (line)
    {
        char* csv = nullptr;
        check(unc_joint_profile_csv(joint, grid, &csv));
        profile = take(csv);
    }
    std::string profile_path;
    if (line && !a.out.empty())
    {
        profile_path = a.out + ".profile.csv";
        emit(profile, profile_path);
    }
    char* desc = nullptr;
    check(unc_joint_describe(joint,
                             profile_path.empty() ? nullptr : profile_path.c_str(),
                             &desc));
    Json j = Json::parse(take(desc));
    if (line && a.out.empty())
        j["profile_grid"] = csv_to_json(profile);
    emit(j.dump(2), a.out);
    return 0;
}

struct RegionArgs
{
    std::string point;
    double tol{1e-9};
    std::size_t points{400};
    std::string objective{"sum-sq"};
    std::vector<double> weights;
    int exponent{2};
    std::uint64_t seed{42};
    std::string out;
    ObsFlags obs;
};

int run_contains(RegionArgs const& a, CLI::App const* app)
{
    auto const obs = a.obs.load(app);
    auto const ptrs = raw(obs);
    auto const p = Json::parse("[" + a.point + "]", nullptr, false);
    std::size_t const need = ptrs.size() == 1 ? 2 : ptrs.size();
    if (p.is_discarded() || p.size() != need)
    {
        throw Failure{exit_usage, "--point needs " + std::to_string(need)
                                      + " comma-separated numbers"};
    }
    std::vector<double> pt;
    for (auto const& x : p)
    {
        if (!x.is_number())
            throw Failure{exit_usage, "invalid --point '" + a.point + "'"};
        pt.push_back(x.get<double>());
    }
    int inside = 0;
    check(unc_region_contains(ptrs.data(), ptrs.size(), pt.data(), a.tol, &inside));
    Json j;
    j["point"] = pt;
    j["inside"] = inside != 0;
    emit(j.dump(2), a.out);
    return 0;
}

int run_supercube(RegionArgs const& a, CLI::App const* app)
{
    auto const obs = a.obs.load(app);
    auto const ptrs = raw(obs);
    std::vector<double> upper(ptrs.size());
    check(unc_region_supercube(ptrs.data(), ptrs.size(), upper.data()));
    Json j;
    j["lower"] = std::vector<double>(ptrs.size(), 0.0);
    j["upper"] = upper;
    emit(j.dump(2), a.out);
    return 0;
}

int run_support(RegionArgs const& a, CLI::App const* app)
{
    auto const obs = a.obs.load(app);
    if (obs.size() != 1)
        throw Failure{exit_usage, "support takes exactly one observable"};
    char* csv = nullptr;
    check(unc_region_support_csv(obs[0].get(), a.points, &csv));
    emit(take(csv), a.out);
    return 0;
}

int run_min(RegionArgs const& a, CLI::App const* app)
{
    auto const obs = a.obs.load(app);
    auto const ptrs = raw(obs);
    unc_objective obj = UNC_SUM_OF_VARIANCES;
    if (a.objective == "sum")
        obj = UNC_SUM_OF_STDDEVS;
    else if (a.objective == "weighted")
        obj = UNC_WEIGHTED;
    if (obj == UNC_WEIGHTED && a.weights.size() != ptrs.size())
        throw Failure{exit_usage, "--weights needs one value per observable"};
    char* json = nullptr;
    check(unc_minimize(obj, a.weights.empty() ? nullptr : a.weights.data(),
                       a.exponent, ptrs.data(), ptrs.size(), a.seed, &json));
    emit(take(json), a.out);
    return 0;
}

struct VerifyArgs
{
    std::string suite{"default"};
    std::uint64_t seed{42};
    std::size_t n{0};
    int workers{0};
    std::string out;
};

int run_verify(VerifyArgs const& a)
{
    char* json = nullptr;
    int all_passed = 0;
    check(unc_verify_suite(a.suite.c_str(), a.seed, a.n, a.workers, &json,
                           &all_passed));
    std::string const text = take(json);
    emit(text, a.out);
    if (!all_passed)
    {
        for (auto const& r : Json::parse(text))
        {
            if (!r["passed"].get<bool>())
                std::cerr << "FAILED " << r["test_name"].get<std::string>() << '\n';
        }
        return exit_failure;
    }
    return 0;
}

struct FigureArgs
{
    std::vector<std::string> which;
    std::string out{"."};
};

int run_figures(FigureArgs const& a)
{
    std::vector<std::string> names = a.which;
    if (names.empty())
        names = {"fig1a", "fig1b", "fig2a", "fig2b"};
    std::filesystem::create_directories(a.out);
    for (auto const& name : names)
    {
        unc_figure* fig = nullptr;
        check(unc_figure_create(name.c_str(), &fig));
        std::unique_ptr<unc_figure, void (*)(unc_figure*)> guard(fig, unc_figure_free);
        for (std::size_t i = 0; i < unc_figure_count(fig); ++i)
        {
            auto const path = (std::filesystem::path(a.out) / unc_figure_name(fig, i)).string();
            emit(unc_figure_content(fig, i), path);
            std::cout << path << '\n';
        }
    }
    return 0;
}

struct SampleArgs
{
    std::string statistic{"exp"};
    std::uint64_t seed{42};
    std::size_t n{1000};
    int workers{0};
    std::string out;
    ObsFlags obs;
};

int run_sample(SampleArgs const& a, CLI::App const* app)
{
    auto const obs = a.obs.load(app);
    auto const ptrs = raw(obs);
    char* csv = nullptr;
    check(unc_sample_csv(ptrs.data(), ptrs.size(),
                         a.statistic == "std" ? UNC_STAT_STDDEV : UNC_STAT_EXPECTATION,
                         a.seed, a.n, a.workers, &csv));
    emit(take(csv), a.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Probability densities of quantum uncertainties"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(unc_version()));

    PdfArgs pdf;
    auto* pdf_cmd = app.add_subcommand("pdf", "Evaluate a density on a grid");
    pdf_cmd->add_option("kind", pdf.kind, "Density kind")
        ->required()
        ->check(CLI::IsMember({"expectation", "uncertainty", "joint-exp", "joint-unc",
                               "exp-exp2", "exp-std"}));
    pdf_cmd->add_option("--grid", pdf.grid, "lo:hi:n[,lo:hi:n], inclusive");
    pdf_cmd->add_option("--out", pdf.out, "Output path (stdout if omitted)");
    pdf_cmd->add_option("--format", pdf.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    pdf.obs.attach(pdf_cmd);

    RegionArgs region;
    auto* region_cmd = app.add_subcommand("region", "Uncertainty regions");
    region_cmd->require_subcommand(1);
    auto* contains_cmd = region_cmd->add_subcommand("contains", "Membership test");
    contains_cmd->add_option("--point", region.point,
                             "Uncertainty tuple, or <A>,DeltaA for one observable")
        ->required();
    contains_cmd->add_option("--tol", region.tol, "Slack tolerance");
    region.obs.attach(contains_cmd);

    RegionArgs cube;
    auto* cube_cmd = region_cmd->add_subcommand("supercube", "Bounding box of the region");
    cube.obs.attach(cube_cmd);
    cube_cmd->add_option("--out", cube.out, "Output path");

    RegionArgs support;
    auto* support_cmd
        = region_cmd->add_subcommand("support", "Boundary of the (<A>, DeltaA) support");
    support_cmd->add_option("--points", support.points, "Points per arc")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
    support_cmd->add_option("--out", support.out, "Output path");
    support.obs.attach(support_cmd);

    RegionArgs rmin;
    RegionArgs tmin;
    auto add_min = [](CLI::App* cmd, RegionArgs& args) {
        cmd->add_option("--objective", args.objective, "sum-sq, sum or weighted")
            ->check(CLI::IsMember({"sum-sq", "sum", "weighted"}));
        cmd->add_option("--weights", args.weights, "Weights for --objective weighted")
            ->delimiter(',');
        cmd->add_option("--exponent", args.exponent, "1 or 2 for weighted objectives")
            ->check(CLI::IsMember({1, 2}));
        cmd->add_option("--seed", args.seed, "Seed for Haar restarts (non-qubit)");
        cmd->add_option("--out", args.out, "Output path");
        args.obs.attach(cmd);
    };
    auto* region_min_cmd = region_cmd->add_subcommand("min", "Minimize an objective");
    add_min(region_min_cmd, rmin);
    auto* min_cmd = app.add_subcommand("min", "Minimize an objective (same as region min)");
    add_min(min_cmd, tmin);
    contains_cmd->add_option("--out", region.out, "Output path");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo verification suite");
    verify_cmd->add_option("--suite", verify.suite,
                           "default, negative, or a single test name");
    verify_cmd->add_option("--seed", verify.seed, "Sampler seed");
    verify_cmd->add_option("--n", verify.n, "Samples per test (overrides defaults)")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--workers", verify.workers, "Sampler workers")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_option("--out", verify.out, "Write the JSON report here");

    FigureArgs figs;
    auto* fig_cmd = app.add_subcommand("figures", "Write figure data as CSV");
    fig_cmd->add_option("which", figs.which, "fig1a fig1b fig2a fig2b (default all)")
        ->check(CLI::IsMember({"fig1a", "fig1b", "fig2a", "fig2b"}));
    fig_cmd->add_option("--out", figs.out, "Output directory");

    SampleArgs sample;
    auto* sample_cmd = app.add_subcommand("sample", "Haar-random statistics as CSV");
    sample_cmd->add_option("--stat", sample.statistic, "exp or std")
        ->check(CLI::IsMember({"exp", "std"}));
    sample_cmd->add_option("--seed", sample.seed, "Sampler seed");
    sample_cmd->add_option("--n", sample.n, "Number of samples")->check(CLI::PositiveNumber);
    sample_cmd->add_option("--workers", sample.workers, "Sampler workers")
        ->check(CLI::PositiveNumber);
    sample_cmd->add_option("--out", sample.out, "Output path");
    sample.obs.attach(sample_cmd);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try
    {
        if (*pdf_cmd)
            return run_pdf(pdf, pdf_cmd);
        if (*contains_cmd)
            return run_contains(region, contains_cmd);
        if (*cube_cmd)
            return run_supercube(cube, cube_cmd);
        if (*support_cmd)
            return run_support(support, support_cmd);
        if (*region_min_cmd)
            return run_min(rmin, region_min_cmd);
        if (*min_cmd)
            return run_min(tmin, min_cmd);
        if (*verify_cmd)
            return run_verify(verify);
        if (*fig_cmd)
            return run_figures(figs);
        if (*sample_cmd)
            return run_sample(sample, sample_cmd);
    }
    catch (Failure const& f)
    {
        std::cerr << "error: " << f.message << '\n';
        return f.exit_code;
    }
    catch (std::exception const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}
