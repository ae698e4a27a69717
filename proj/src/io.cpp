#include "uncpdf/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "uncpdf/regions.hpp"

namespace uncpdf
{
namespace
{
using Json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(std::string const& what)
{
    fail(ErrorCode::parse_error, what);
}

double number_at(Json const& j, std::string const& where)
{
    if (!j.is_number())
        parse_fail(where + " must be a number");
    return j.get<double>();
}

std::vector<double> number_array(Json const& j, std::string const& where)
{
    if (!j.is_array())
        parse_fail(where + " must be an array of numbers");
    std::vector<double> out;
    for (auto const& v : j)
        out.push_back(number_at(v, where));
    return out;
}

Eigen::MatrixXd real_matrix(Json const& j, std::string const& where)
{
    if (!j.is_array() || j.empty())
        parse_fail(where + " must be a non-empty array of rows");
    auto const n = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
    {
        auto const row = number_array(j[static_cast<std::size_t>(i)], where);
        if (static_cast<Eigen::Index>(row.size()) != n)
            parse_fail(where + " must be square");
        for (Eigen::Index k = 0; k < n; ++k)
            m(i, k) = row[static_cast<std::size_t>(k)];
    }
    return m;
}

Json matrix_rows(Eigen::MatrixXd const& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
    {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

double parse_double(std::string_view text, std::string const& where)
{
    while (!text.empty() && text.front() == ' ')
        text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ')
        text.remove_suffix(1);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double value = 0;
    auto const* end = text.data() + text.size();
    auto const [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value))
        parse_fail("invalid number '" + std::string(text) + "' in " + where);
    return value;
}

std::vector<std::string_view> split(std::string_view text, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true)
    {
        auto const pos = text.find(sep, start);
        if (pos == std::string_view::npos)
        {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

GridAxis default_axis(Interval range, std::size_t n)
{
    return {range.lo, range.hi, n};
}

Json profile_json(std::variant<Density2D, Pdf1D> const& profile)
{
    Json j;
    if (auto const* pdf = std::get_if<Pdf1D>(&profile))
    {
        j["kind"] = "pdf";
        j["variable"] = pdf->variable();
        j["support"] = {pdf->support().lo, pdf->support().hi};
        j["breakpoints"] = pdf->breakpoints();
        j["singular_points"] = pdf->singular_points();
    }
    else
    {
        auto const& d = std::get<Density2D>(profile);
        j["kind"] = "density";
        j["variables"] = {d.u_name, d.v_name};
        j["u_range"] = {d.u_range.lo, d.u_range.hi};
        j["v_range"] = {d.v_range.lo, d.v_range.hi};
    }
    return j;
}

}  // namespace

//---------------------------------------------------------------------------//
// OBSERVABLE SPEC
//---------------------------------------------------------------------------//
ObservableSpec ObservableSpec::from_spectrum(std::vector<double> values)
{
    if (values.empty())
        fail(ErrorCode::dim_too_small, "spectrum is empty");
    for (double v : values)
    {
        if (!std::isfinite(v))
            fail(ErrorCode::invalid_argument, "spectrum values must be finite");
    }
    ObservableSpec s;
    s.kind_ = Kind::spectrum;
    s.values_ = std::move(values);
    return s;
}

ObservableSpec ObservableSpec::from_qubit(QubitObservable const& q)
{
    ObservableSpec s;
    s.kind_ = Kind::qubit;
    s.qubit_ = q;
    return s;
}

ObservableSpec ObservableSpec::from_matrix(CMatrix const& m)
{
    // Validates Hermiticity
    HermitianObservable const check(m);
    ObservableSpec s;
    s.kind_ = Kind::matrix;
    s.matrix_ = m;
    return s;
}

ObservableSpec ObservableSpec::parse_json(std::string_view text)
{
    Json j;
    try
    {
        j = Json::parse(text);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        parse_fail(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || j.size() != 1)
        parse_fail("observable must be an object with one of the keys "
                   "spectrum, qubit, matrix");
    if (j.contains("spectrum"))
        return from_spectrum(number_array(j["spectrum"], "spectrum"));
    if (j.contains("qubit"))
    {
        auto const& q = j["qubit"];
        if (!q.is_object() || !q.contains("a"))
            parse_fail("qubit needs fields a0 and a");
        QubitObservable out;
        out.a0 = q.contains("a0") ? number_at(q["a0"], "qubit.a0") : 0.0;
        auto const a = number_array(q["a"], "qubit.a");
        if (a.size() != 3)
            parse_fail("qubit.a must have 3 entries");
        out.a = Vec3(a[0], a[1], a[2]);
        return from_qubit(out);
    }
    if (j.contains("matrix"))
    {
        auto const& m = j["matrix"];
        if (!m.is_object() || !m.contains("re"))
            parse_fail("matrix needs field re");
        Eigen::MatrixXd const re = real_matrix(m["re"], "matrix.re");
        Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
        if (m.contains("im"))
        {
            im = real_matrix(m["im"], "matrix.im");
            if (im.rows() != re.rows())
                parse_fail("matrix.re and matrix.im differ in size");
        }
        CMatrix c(re.rows(), re.cols());
        c.real() = re;
        c.imag() = im;
        return from_matrix(c);
    }
    parse_fail("observable must have one of the keys spectrum, qubit, matrix");
}

std::string ObservableSpec::to_json(int indent) const
{
    Json j;
    switch (kind_)
    {
        case Kind::spectrum:
            j["spectrum"] = values_;
            break;
        case Kind::qubit:
            j["qubit"]["a0"] = qubit_.a0;
            j["qubit"]["a"] = {qubit_.a.x(), qubit_.a.y(), qubit_.a.z()};
            break;
        case Kind::matrix:
            j["matrix"]["re"] = matrix_rows(matrix_.real());
            j["matrix"]["im"] = matrix_rows(matrix_.imag());
            break;
    }
    return j.dump(indent);
}

int ObservableSpec::dim() const
{
    switch (kind_)
    {
        case Kind::spectrum:
            return static_cast<int>(values_.size());
        case Kind::qubit:
            return 2;
        case Kind::matrix:
            return static_cast<int>(matrix_.rows());
    }
    return 0;
}

HermitianObservable ObservableSpec::to_hermitian() const
{
    switch (kind_)
    {
        case Kind::spectrum:
            return HermitianObservable::diagonal(values_);
        case Kind::qubit:
            return qubit_.to_hermitian();
        case Kind::matrix:
            break;
    }
    return HermitianObservable(matrix_);
}

Spectrum ObservableSpec::spectrum() const
{
    if (kind_ == Kind::spectrum)
        return Spectrum(values_);
    if (kind_ == Kind::qubit)
        return qubit_.spectrum();
    return spectrum_of(this->to_hermitian());
}

QubitObservable ObservableSpec::to_qubit() const
{
    if (kind_ == Kind::qubit)
        return qubit_;
    return uncpdf::to_qubit(this->to_hermitian());
}

bool ObservableSpec::operator==(ObservableSpec const& other) const
{
    if (kind_ != other.kind_)
        return false;
    switch (kind_)
    {
        case Kind::spectrum:
            return values_ == other.values_;
        case Kind::qubit:
            return qubit_.a0 == other.qubit_.a0 && qubit_.a == other.qubit_.a;
        case Kind::matrix:
            return matrix_.rows() == other.matrix_.rows()
                   && matrix_ == other.matrix_;
    }
    return false;
}

ObservableSpec read_observable_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::io_error, "cannot read " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return ObservableSpec::parse_json(buf.str());
}

//---------------------------------------------------------------------------//
// GRIDS AND LISTS
//---------------------------------------------------------------------------//
double GridAxis::node(std::size_t i) const
{
    if (i + 1 == n)
        return hi;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

std::vector<GridAxis> parse_grid(std::string_view text)
{
    std::vector<GridAxis> out;
    for (auto part : split(text, ','))
    {
        auto const fields = split(part, ':');
        if (fields.size() != 3)
            parse_fail("grid axis must look like lo:hi:n, got '"
                       + std::string(part) + "'");
        GridAxis ax;
        ax.lo = parse_double(fields[0], "grid");
        ax.hi = parse_double(fields[1], "grid");
        std::size_t n = 0;
        auto const f = fields[2];
        auto const [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), n);
        if (f.empty() || ec != std::errc{} || ptr != f.data() + f.size())
            parse_fail("grid point count must be an integer, got '"
                       + std::string(f) + "'");
        if (n < 2)
            parse_fail("grid needs at least 2 points per axis");
        if (!(ax.hi > ax.lo))
            parse_fail("grid needs lo < hi");
        ax.n = n;
        out.push_back(ax);
    }
    if (out.size() > 2)
        parse_fail("grid has at most two axes");
    return out;
}

std::vector<double> parse_list(std::string_view text)
{
    std::vector<double> out;
    for (auto part : split(text, ','))
        out.push_back(parse_double(part, "list"));
    return out;
}

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//
std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (value == 0)
        return "0";
    char buf[64];
    auto const res = std::to_chars(buf, buf + sizeof(buf), value,
                                   std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

std::string csv_pdf_1d(Pdf1D const& pdf, GridAxis const& axis)
{
    std::string out = pdf.variable() + ",f\n";
    for (std::size_t i = 0; i < axis.n; ++i)
    {
        double const x = axis.node(i);
        out += format_number(x);
        out += ',';
        out += format_number(pdf(x));
        out += '\n';
    }
    return out;
}

std::string csv_density_2d(Density2D const& density,
                           GridAxis const& u_axis,
                           GridAxis const& v_axis)
{
    std::string out = density.u_name + "," + density.v_name + ",f\n";
    for (std::size_t i = 0; i < u_axis.n; ++i)
    {
        double const u = u_axis.node(i);
        for (std::size_t k = 0; k < v_axis.n; ++k)
        {
            double const v = v_axis.node(k);
            out += format_number(u);
            out += ',';
            out += format_number(v);
            out += ',';
            out += format_number(density(u, v));
            out += '\n';
        }
    }
    return out;
}

std::string csv_samples(SampleTable const& table,
                        std::vector<std::string> const& header)
{
    if (header.size() != table.cols)
        fail(ErrorCode::dim_mismatch, "header does not match sample columns");
    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c)
        out += (c ? "," : "") + header[c];
    out += '\n';
    for (std::size_t r = 0; r < table.rows(); ++r)
    {
        for (std::size_t c = 0; c < table.cols; ++c)
        {
            if (c)
                out += ',';
            out += format_number(table(r, c));
        }
        out += '\n';
    }
    return out;
}

//---------------------------------------------------------------------------//
// SINGULAR DISTRIBUTIONS
//---------------------------------------------------------------------------//
LineSingular as_line(UncertaintyCurve const& curve)
{
    LineSingular line;
    line.center = {0, 0};
    line.constraints = {{1, {{0, curve.slope}}}};
    line.free_coordinates = {0};
    line.profile = curve.profile;
    return line;
}

std::string describe_singular(JointDistribution const& dist,
                              std::string const& profile_ref,
                              int indent)
{
    Json j;
    j["variant"] = variant_name(dist);
    if (auto const* line = std::get_if<LineSingular>(&dist))
    {
        j["center"] = line->center;
        j["free_coordinates"] = line->free_coordinates;
        Json cons = Json::array();
        for (auto const& c : line->constraints)
        {
            Json terms = Json::array();
            for (auto const& [k, kappa] : c.terms)
                terms.push_back({{"coordinate", k}, {"coefficient", kappa}});
            cons.push_back({{"dependent", c.dependent}, {"terms", terms}});
        }
        j["constraints"] = cons;
        j["profile"] = profile_json(line->profile);
    }
    else if (auto const* surf = std::get_if<SurfaceSingular>(&dist))
    {
        j["center"] = surf->center;
        j["gram"] = matrix_rows(surf->gram);
        j["gram_det"] = surf->gram_det;
        j["weight"] = surf->weight();
    }
    else
    {
        auto const& d = std::get<Density2D>(dist);
        j["variables"] = {d.u_name, d.v_name};
        j["u_range"] = {d.u_range.lo, d.u_range.hi};
        j["v_range"] = {d.v_range.lo, d.v_range.hi};
    }
    if (!profile_ref.empty())
        j["profile_csv"] = profile_ref;
    return j.dump(indent);
}

std::string describe_surface(UncertaintySurface const& surface, int indent)
{
    auto const& e = surface.expectations();
    Json j;
    j["variant"] = "surface_singular";
    j["statistic"] = "uncertainty";
    j["norms"] = surface.norms();
    j["expectation_center"] = e.center;
    j["gram"] = matrix_rows(e.gram);
    j["gram_det"] = e.gram_det;
    return j.dump(indent);
}

std::string profile_csv(LineSingular const& line,
                        std::vector<GridAxis> const& grid)
{
    if (auto const* pdf = std::get_if<Pdf1D>(&line.profile))
    {
        GridAxis const ax
            = grid.empty() ? default_axis(pdf->support(), 201) : grid.front();
        return csv_pdf_1d(*pdf, ax);
    }
    auto const& d = std::get<Density2D>(line.profile);
    if (grid.size() == 2)
        return csv_density_2d(d, grid[0], grid[1]);
    return csv_density_2d(d, default_axis(d.u_range, 101),
                          default_axis(d.v_range, 101));
}

//---------------------------------------------------------------------------//
// FIGURES
//---------------------------------------------------------------------------//
std::vector<std::string> figure_names()
{
    return {"fig1a", "fig1b", "fig2a", "fig2b"};
}

std::vector<FigureFile> figure(std::string_view which)
{
    std::vector<double> const s3{1, 3, 9};
    std::vector<double> const s4{1, 3, 9, 27};
    std::string const name(which);
    if (which == "fig1a" || which == "fig1b")
    {
        Spectrum const spec(which == "fig1a" ? s3 : s4);
        std::string out = "curve,r,x\n";
        for (auto const& poly : support_regions(spec).boundary_rx(400))
        {
            for (auto const& p : poly.points)
            {
                out += poly.label + ',' + format_number(p[0]) + ','
                       + format_number(p[1]) + '\n';
            }
        }
        return {{name + ".csv", out}};
    }
    if (which == "fig2a" || which == "fig2b")
    {
        Spectrum const spec(which == "fig2a" ? s3 : s4);
        auto const pdf = pdf_uncertainty(spec);
        GridAxis const ax{pdf.support().lo, pdf.support().hi, 2000};
        std::string breaks = "x\n";
        for (double b : pdf.breakpoints())
            breaks += format_number(b) + '\n';
        return {{name + ".csv", csv_pdf_1d(pdf, ax)},
                {name + "_breakpoints.csv", breaks}};
    }
    fail(ErrorCode::invalid_argument,
         "unknown figure '" + name + "' (expected fig1a, fig1b, fig2a, fig2b)");
}

}  // namespace uncpdf
