#include "uncpdf/uncpdf.h"

#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "uncpdf/io.hpp"
#include "uncpdf/mc_verify.hpp"
#include "uncpdf/pdf_analytic.hpp"
#include "uncpdf/regions.hpp"

using namespace uncpdf;

struct unc_observable
{
    ObservableSpec spec;
};

struct unc_pdf
{
    Pdf1D pdf;
};

struct unc_joint
{
    std::variant<JointDistribution, UncertaintySurface> dist;
};

struct unc_figure
{
    std::vector<FigureFile> files;
};

namespace
{
thread_local std::string last_error;

template<class F>
unc_status guarded(F&& f)
{
    try
    {
        f();
        last_error.clear();
        return UNC_OK;
    }
    catch (Error const& e)
    {
        last_error = e.what();
        return static_cast<unc_status>(e.code());
    }
    catch (std::exception const& e)
    {
        last_error = e.what();
        return UNC_ERR_INTERNAL;
    }
    catch (...)
    {
        last_error = "unknown failure";
        return UNC_ERR_INTERNAL;
    }
}

template<class... Ts>
void require(Ts const*... ptrs)
{
    if (((ptrs == nullptr) || ...))
        fail(ErrorCode::invalid_argument, "null pointer argument");
}

char* copy_string(std::string const& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::vector<ObservableSpec const*>
specs(unc_observable const* const* obs, std::size_t n)
{
    if (n > 0)
        require(obs);
    std::vector<ObservableSpec const*> out;
    for (std::size_t i = 0; i < n; ++i)
    {
        require(obs[i]);
        out.push_back(&obs[i]->spec);
    }
    return out;
}

std::vector<QubitObservable> qubits(std::vector<ObservableSpec const*> const& s)
{
    std::vector<QubitObservable> out;
    for (auto const* o : s)
        out.push_back(o->to_qubit());
    return out;
}

JointDistribution const& distribution(unc_joint const* joint)
{
    require(joint);
    auto const* d = std::get_if<JointDistribution>(&joint->dist);
    if (!d)
        fail(ErrorCode::wrong_variant, "uncertainty surface has no grid form");
    return *d;
}

Density2D const& density(unc_joint const* joint)
{
    auto const* d = std::get_if<Density2D>(&distribution(joint));
    if (!d)
        fail(ErrorCode::wrong_variant, "distribution is singular");
    return *d;
}

void copy_array(std::vector<double> const& v, double* buf, std::size_t cap,
                std::size_t* count)
{
    require(count);
    *count = v.size();
    if (buf)
        std::copy_n(v.begin(), std::min(cap, v.size()), buf);
}

}  // namespace

extern "C" {

//---------------------------------------------------------------------------//
// ERRORS AND MEMORY
//---------------------------------------------------------------------------//
const char* unc_last_error(void)
{
    return last_error.c_str();
}

const char* unc_status_name(unc_status status)
{
    return to_string(static_cast<ErrorCode>(status));
}

const char* unc_version(void)
{
    return "0.1.0";
}

void unc_string_free(char* str)
{
    std::free(str);
}

//---------------------------------------------------------------------------//
// OBSERVABLES
//---------------------------------------------------------------------------//
unc_status unc_observable_from_spectrum(const double* values, size_t n,
                                        unc_observable** out)
{
    return guarded([&] {
        require(values, out);
        *out = new unc_observable{
            ObservableSpec::from_spectrum(std::vector<double>(values, values + n))};
    });
}

unc_status unc_observable_from_qubit(double a0, double ax, double ay,
                                     double az, unc_observable** out)
{
    return guarded([&] {
        require(out);
        *out = new unc_observable{
            ObservableSpec::from_qubit({a0, Vec3(ax, ay, az)})};
    });
}

unc_status unc_observable_from_matrix(const double* re, const double* im,
                                      size_t d, unc_observable** out)
{
    return guarded([&] {
        require(re, out);
        if (d == 0)
            fail(ErrorCode::dim_too_small, "matrix dimension is zero");
        auto const n = static_cast<Eigen::Index>(d);
        CMatrix m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            for (Eigen::Index k = 0; k < n; ++k)
            {
                auto const idx = static_cast<std::size_t>(i * n + k);
                m(i, k) = Complex(re[idx], im ? im[idx] : 0.0);
            }
        }
        *out = new unc_observable{ObservableSpec::from_matrix(m)};
    });
}

unc_status unc_observable_from_json(const char* json, unc_observable** out)
{
    return guarded([&] {
        require(json, out);
        *out = new unc_observable{ObservableSpec::parse_json(json)};
    });
}

unc_status unc_observable_read_file(const char* path, unc_observable** out)
{
    return guarded([&] {
        require(path, out);
        *out = new unc_observable{read_observable_file(path)};
    });
}

unc_status unc_observable_to_json(const unc_observable* obs, char** out)
{
    return guarded([&] {
        require(obs, out);
        *out = copy_string(obs->spec.to_json());
    });
}

unc_status unc_observable_dim(const unc_observable* obs, int* out)
{
    return guarded([&] {
        require(obs, out);
        *out = obs->spec.dim();
    });
}

unc_status unc_observable_spectrum(const unc_observable* obs, double* buf,
                                   size_t capacity, size_t* count)
{
    return guarded([&] {
        require(obs);
        copy_array(obs->spec.spectrum().values(), buf, capacity, count);
    });
}

unc_status unc_max_variance(const unc_observable* obs, double* out)
{
    return guarded([&] {
        require(obs, out);
        *out = max_variance(obs->spec.spectrum());
    });
}

void unc_observable_free(unc_observable* obs)
{
    delete obs;
}

//---------------------------------------------------------------------------//
// ONE-DIMENSIONAL DENSITIES
//---------------------------------------------------------------------------//
unc_status unc_pdf_create(unc_pdf_kind kind, const unc_observable* obs,
                          unc_pdf** out)
{
    return guarded([&] {
        require(obs, out);
        switch (kind)
        {
            case UNC_PDF_EXPECTATION:
                *out = new unc_pdf{pdf_expectation(obs->spec.spectrum())};
                return;
            case UNC_PDF_UNCERTAINTY:
                if (obs->spec.kind() == ObservableSpec::Kind::qubit)
                    *out = new unc_pdf{pdf_uncertainty_qubit(obs->spec.to_qubit())};
                else
                    *out = new unc_pdf{pdf_uncertainty(obs->spec.spectrum())};
                return;
        }
        fail(ErrorCode::invalid_argument, "unknown pdf kind");
    });
}

unc_status unc_pdf_eval(const unc_pdf* pdf, double x, double* value,
                        int* singular)
{
    return guarded([&] {
        require(pdf, value);
        auto const v = pdf->pdf.eval(x);
        *value = v.value;
        if (singular)
            *singular = v.singular ? 1 : 0;
    });
}

unc_status unc_pdf_cdf(const unc_pdf* pdf, double x, double* out)
{
    return guarded([&] {
        require(pdf, out);
        *out = pdf->pdf.cdf(x);
    });
}

unc_status unc_pdf_total_mass(const unc_pdf* pdf, double* out)
{
    return guarded([&] {
        require(pdf, out);
        *out = pdf->pdf.total_mass();
    });
}

unc_status unc_pdf_support(const unc_pdf* pdf, double* lo, double* hi)
{
    return guarded([&] {
        require(pdf, lo, hi);
        *lo = pdf->pdf.support().lo;
        *hi = pdf->pdf.support().hi;
    });
}

unc_status unc_pdf_breakpoints(const unc_pdf* pdf, double* buf,
                               size_t capacity, size_t* count)
{
    return guarded([&] {
        require(pdf);
        copy_array(pdf->pdf.breakpoints(), buf, capacity, count);
    });
}

unc_status unc_pdf_grid_csv(const unc_pdf* pdf, const char* grid, char** out)
{
    return guarded([&] {
        require(pdf, out);
        GridAxis ax{pdf->pdf.support().lo, pdf->pdf.support().hi, 201};
        if (grid)
        {
            auto const axes = parse_grid(grid);
            if (axes.size() != 1)
                fail(ErrorCode::parse_error, "one-dimensional grid expected");
            ax = axes.front();
        }
        *out = copy_string(csv_pdf_1d(pdf->pdf, ax));
    });
}

void unc_pdf_free(unc_pdf* pdf)
{
    delete pdf;
}

//---------------------------------------------------------------------------//
// JOINT DISTRIBUTIONS
//---------------------------------------------------------------------------//
unc_status unc_joint_create(unc_joint_kind kind,
                            const unc_observable* const* obs,
                            size_t n_obs,
                            unc_joint** out)
{
    return guarded([&] {
        require(out);
        auto const s = specs(obs, n_obs);
        auto need = [&](std::size_t lo, std::size_t hi, char const* what) {
            if (s.size() < lo || s.size() > hi)
                fail(ErrorCode::invalid_argument, what);
        };
        switch (kind)
        {
            case UNC_JOINT_EXPECTATIONS: {
                need(2, 3, "joint expectations need 2 or 3 qubit observables");
                auto const q = qubits(s);
                *out = new unc_joint{
                    q.size() == 2 ? joint_expectations_qubit2(q[0], q[1])
                                  : joint_expectations_qubit3(q[0], q[1], q[2])};
                return;
            }
            case UNC_JOINT_UNCERTAINTIES: {
                need(2, 3, "joint uncertainties need 2 or 3 qubit observables");
                auto const q = qubits(s);
                if (q.size() == 3)
                {
                    *out = new unc_joint{uncertainty_surface_qubit3(q[0], q[1], q[2])};
                    return;
                }
                auto rel = uncertainty_relation_qubit2(q[0], q[1]);
                if (auto* d = std::get_if<Density2D>(&rel))
                    *out = new unc_joint{JointDistribution(std::move(*d))};
                else
                    *out = new unc_joint{JointDistribution(
                        as_line(std::get<UncertaintyCurve>(rel)))};
                return;
            }
            case UNC_JOINT_EXP_EXP2:
                need(1, 1, "exp-exp2 takes one observable");
                *out = new unc_joint{
                    JointDistribution(joint_exp_exp2(s[0]->spectrum()))};
                return;
            case UNC_JOINT_EXP_STD:
                need(1, 1, "exp-std takes one observable");
                *out = new unc_joint{
                    JointDistribution(joint_exp_std(s[0]->spectrum()))};
                return;
        }
        fail(ErrorCode::invalid_argument, "unknown joint kind");
    });
}

unc_status unc_joint_variant(const unc_joint* joint, const char** out)
{
    return guarded([&] {
        require(joint, out);
        if (auto const* d = std::get_if<JointDistribution>(&joint->dist))
            *out = variant_name(*d);
        else
            *out = "surface_singular";
    });
}

unc_status unc_joint_eval(const unc_joint* joint, double u, double v,
                          double* out)
{
    return guarded([&] {
        require(out);
        *out = density(joint)(u, v);
    });
}

unc_status unc_joint_total_mass(const unc_joint* joint, double* out)
{
    return guarded([&] {
        require(out);
        auto const& dist = distribution(joint);
        if (auto const* line = std::get_if<LineSingular>(&dist))
        {
            if (auto const* p = std::get_if<Pdf1D>(&line->profile))
                *out = p->total_mass();
            else
                *out = std::get<Density2D>(line->profile).total_mass();
            return;
        }
        *out = density(joint).total_mass();
    });
}

unc_status unc_joint_grid_csv(const unc_joint* joint, const char* grid,
                              char** out)
{
    return guarded([&] {
        require(out);
        auto const& d = density(joint);
        GridAxis u{d.u_range.lo, d.u_range.hi, 101};
        GridAxis v{d.v_range.lo, d.v_range.hi, 101};
        if (grid)
        {
            auto const axes = parse_grid(grid);
            if (axes.size() != 2)
                fail(ErrorCode::parse_error, "two-dimensional grid expected");
            u = axes[0];
            v = axes[1];
        }
        *out = copy_string(csv_density_2d(d, u, v));
    });
}

unc_status unc_joint_describe(const unc_joint* joint, const char* profile_ref,
                              char** out)
{
    return guarded([&] {
        require(joint, out);
        if (auto const* s = std::get_if<UncertaintySurface>(&joint->dist))
        {
            *out = copy_string(describe_surface(*s));
            return;
        }
        *out = copy_string(describe_singular(std::get<JointDistribution>(joint->dist),
                                             profile_ref ? profile_ref : ""));
    });
}

unc_status unc_joint_profile_csv(const unc_joint* joint, const char* grid,
                                 char** out)
{
    return guarded([&] {
        require(out);
        auto const* line = std::get_if<LineSingular>(&distribution(joint));
        if (!line)
            fail(ErrorCode::wrong_variant, "only line distributions have a profile");
        std::vector<GridAxis> axes;
        if (grid)
            axes = parse_grid(grid);
        *out = copy_string(profile_csv(*line, axes));
    });
}

void unc_joint_free(unc_joint* joint)
{
    delete joint;
}

//---------------------------------------------------------------------------//
// REGIONS
//---------------------------------------------------------------------------//
unc_status unc_region_contains(const unc_observable* const* obs, size_t n_obs,
                               const double* point, double tol, int* inside)
{
    return guarded([&] {
        require(point, inside);
        auto const s = specs(obs, n_obs);
        bool result = false;
        if (s.size() == 1)
        {
            result = SupportRegion(s[0]->spectrum())
                         .contains_rx(point[0], point[1], tol);
        }
        else if (s.size() == 2)
        {
            auto const q = qubits(s);
            result = qubit_pair_contains(q[0], q[1], point[0], point[1], tol);
        }
        else if (s.size() == 3)
        {
            auto const q = qubits(s);
            result = qubit_triple_contains(q[0], q[1], q[2], point[0], point[1],
                                           point[2], tol);
        }
        else
        {
            fail(ErrorCode::invalid_argument,
                 "region membership takes 1, 2 or 3 observables");
        }
        *inside = result ? 1 : 0;
    });
}

unc_status unc_region_supercube(const unc_observable* const* obs, size_t n_obs,
                                double* upper)
{
    return guarded([&] {
        require(upper);
        std::vector<Spectrum> spectra;
        for (auto const* o : specs(obs, n_obs))
            spectra.push_back(o->spectrum());
        auto const cube = supercube_bound(spectra);
        for (std::size_t i = 0; i < cube.size(); ++i)
            upper[i] = cube[i].hi;
    });
}

unc_status unc_region_support_csv(const unc_observable* obs,
                                  size_t points_per_arc, char** out)
{
    return guarded([&] {
        require(obs, out);
        if (points_per_arc < 2)
            fail(ErrorCode::invalid_argument, "need at least 2 points per arc");
        std::string csv = "curve,r,x\n";
        for (auto const& poly :
             support_regions(obs->spec.spectrum()).boundary_rx(points_per_arc))
        {
            for (auto const& p : poly.points)
            {
                csv += poly.label + ',' + format_number(p[0]) + ','
                       + format_number(p[1]) + '\n';
            }
        }
        *out = copy_string(csv);
    });
}

unc_status unc_minimize(unc_objective objective, const double* weights,
                        int exponent, const unc_observable* const* obs,
                        size_t n_obs, uint64_t seed, char** out)
{
    return guarded([&] {
        require(out);
        auto const s = specs(obs, n_obs);
        Objective obj;
        switch (objective)
        {
            case UNC_SUM_OF_VARIANCES:
                obj = Objective::sum_of_variances();
                break;
            case UNC_SUM_OF_STDDEVS:
                obj = Objective::sum_of_stddevs();
                break;
            case UNC_WEIGHTED:
                require(weights);
                obj = Objective::weighted(
                    std::vector<double>(weights, weights + n_obs), exponent);
                break;
            default:
                fail(ErrorCode::invalid_argument, "unknown objective");
        }

        bool const all_qubits = !s.empty()
                                && std::all_of(s.begin(), s.end(), [](auto* o) {
                                       return o->dim() == 2;
                                   });
        nlohmann::ordered_json j;
        OptimResult res;
        if (all_qubits)
        {
            auto const q = qubits(s);
            res = minimize(obj, q);
            j["method"] = "global";
        }
        else
        {
            std::vector<HermitianObservable> herm;
            for (auto const* o : s)
                herm.push_back(o->to_hermitian());
            res = minimize_heuristic(obj, herm, 16, seed);
            j["method"] = "heuristic";
        }
        j["minimum"] = res.minimum;
        j["argmin"] = res.argmin_uncertainties;
        if (all_qubits)
        {
            Vec3 const b = res.witness_state.bloch();
            j["witness_bloch"] = {b.x(), b.y(), b.z()};
        }
        else
        {
            auto amps = nlohmann::ordered_json::array();
            for (auto const& c : res.witness_state.amplitudes())
                amps.push_back({c.real(), c.imag()});
            j["witness_amplitudes"] = amps;
        }
        j["iterations"] = res.iterations;
        j["converged"] = res.converged;
        *out = copy_string(j.dump(2));
    });
}

unc_status unc_sample_csv(const unc_observable* const* obs, size_t n_obs,
                          unc_statistic statistic, uint64_t seed,
                          size_t n_samples, int n_workers, char** out)
{
    return guarded([&] {
        require(out);
        auto const s = specs(obs, n_obs);
        if (s.empty())
            fail(ErrorCode::invalid_argument, "no observables");
        std::vector<HermitianObservable> herm;
        for (auto const* o : s)
            herm.push_back(o->to_hermitian());
        SamplerConfig cfg;
        cfg.seed = seed;
        cfg.dim = herm.front().dim();
        cfg.n_samples = n_samples;
        if (n_workers > 0)
            cfg.n_workers = n_workers;
        bool const exp = statistic == UNC_STAT_EXPECTATION;
        auto const table = sample_statistics(
            herm, cfg, exp ? Statistic::expectation : Statistic::std_dev);
        std::vector<std::string> header;
        for (std::size_t i = 0; i < herm.size(); ++i)
            header.push_back((exp ? "exp" : "std") + std::to_string(i + 1));
        *out = copy_string(csv_samples(table, header));
    });
}

unc_status unc_verify_suite(const char* suite, uint64_t seed, size_t n_samples,
                            int n_workers, char** json, int* all_passed)
{
    return guarded([&] {
        require(suite, json, all_passed);
        std::optional<std::size_t> n;
        if (n_samples > 0)
            n = n_samples;
        auto const reports = run_suite(
            suite, seed, n,
            n_workers > 0 ? n_workers : SamplerConfig::default_workers());
        bool ok = true;
        for (auto const& r : reports)
            ok = ok && r.passed;
        *json = copy_string(reports_to_json(reports));
        *all_passed = ok ? 1 : 0;
    });
}

//---------------------------------------------------------------------------//
// FIGURES
//---------------------------------------------------------------------------//
unc_status unc_figure_create(const char* which, unc_figure** out)
{
    return guarded([&] {
        require(which, out);
        *out = new unc_figure{figure(which)};
    });
}

size_t unc_figure_count(const unc_figure* fig)
{
    return fig ? fig->files.size() : 0;
}

const char* unc_figure_name(const unc_figure* fig, size_t i)
{
    if (!fig || i >= fig->files.size())
        return nullptr;
    return fig->files[i].name.c_str();
}

const char* unc_figure_content(const unc_figure* fig, size_t i)
{
    if (!fig || i >= fig->files.size())
        return nullptr;
    return fig->files[i].content.c_str();
}

void unc_figure_free(unc_figure* fig)
{
    delete fig;
}

}  // extern "C"
