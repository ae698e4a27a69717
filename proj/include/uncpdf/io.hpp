#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "haar.hpp"
#include "observables.hpp"
#include "pdf_analytic.hpp"

namespace uncpdf
{
//---------------------------------------------------------------------------//
/*!
 * Observable as written in an input file.
 *
 * JSON forms:
 *   {"spectrum": [1, 3, 9]}
 *   {"qubit": {"a0": 0, "a": [0.3, 0.4, 1.2]}}
 *   {"matrix": {"re": [[...], ...], "im": [[...], ...]}}
 * A spectrum stands for the diagonal observable; "im" may be omitted.
 */
class ObservableSpec
{
  public:
    enum class Kind
    {
        spectrum,
        qubit,
        matrix,
    };

    static ObservableSpec from_spectrum(std::vector<double> values);
    static ObservableSpec from_qubit(QubitObservable const& q);
    static ObservableSpec from_matrix(CMatrix const& m);

    //! ParseError on malformed input, NotHermitian for bad matrices
    static ObservableSpec parse_json(std::string_view text);
    std::string to_json(int indent = -1) const;

    Kind kind() const { return kind_; }
    int dim() const;
    HermitianObservable to_hermitian() const;
    Spectrum spectrum() const;
    //! NonQubit unless the observable is 2x2
    QubitObservable to_qubit() const;

    bool operator==(ObservableSpec const& other) const;

  private:
    Kind kind_{Kind::spectrum};
    std::vector<double> values_;
    QubitObservable qubit_;
    CMatrix matrix_;
};

//! Read and parse a JSON observable file (IoError if unreadable)
ObservableSpec read_observable_file(std::string const& path);

//---------------------------------------------------------------------------//
// GRIDS AND LISTS
//---------------------------------------------------------------------------//

//! Inclusive grid lo:hi:n
struct GridAxis
{
    double lo{0};
    double hi{1};
    std::size_t n{2};

    double node(std::size_t i) const;
};

//! "lo:hi:n" or "lo:hi:n,lo:hi:n"; n >= 2 and lo < hi
std::vector<GridAxis> parse_grid(std::string_view text);

//! Comma-separated numbers, e.g. "1,3,9"
std::vector<double> parse_list(std::string_view text);

//---------------------------------------------------------------------------//
// CSV
//---------------------------------------------------------------------------//

//! 12 significant digits, '.' separator, literal inf/-inf/nan
std::string format_number(double value);

//! Header line then row-major grid values
std::string csv_pdf_1d(Pdf1D const& pdf, GridAxis const& axis);
std::string csv_density_2d(Density2D const& density,
                           GridAxis const& u_axis,
                           GridAxis const& v_axis);
std::string csv_samples(SampleTable const& table,
                        std::vector<std::string> const& header);

//---------------------------------------------------------------------------//
// SINGULAR DISTRIBUTIONS
//---------------------------------------------------------------------------//

//! Collinear uncertainty pair expressed as a line in (x, y)
LineSingular as_line(UncertaintyCurve const& curve);

/*!
 * JSON description of a singular distribution: variant name, center,
 * constraints or Gram matrix, and profile metadata. profile_ref is stored
 * verbatim under "profile_csv" when not empty.
 */
std::string describe_singular(JointDistribution const& dist,
                              std::string const& profile_ref = {},
                              int indent = 2);
std::string describe_surface(UncertaintySurface const& surface, int indent = 2);

//! Grid CSV of a line distribution's profile; default grid spans it
std::string profile_csv(LineSingular const& line,
                        std::vector<GridAxis> const& grid = {});

//---------------------------------------------------------------------------//
// FIGURES
//---------------------------------------------------------------------------//

struct FigureFile
{
    std::string name;
    std::string content;
};

//! fig1a, fig1b, fig2a, fig2b
std::vector<std::string> figure_names();

/*!
 * Data behind one figure.
 *
 * fig1a/fig1b: boundary polylines of the (<A>, Delta A) support for
 * spectra (1,3,9) and (1,3,9,27), CSV "curve,r,x".
 * fig2a/fig2b: Delta A density on 2000 points plus its breakpoints.
 */
std::vector<FigureFile> figure(std::string_view which);

}  // namespace uncpdf
