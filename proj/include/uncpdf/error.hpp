#pragma once

#include <stdexcept>
#include <string>

namespace uncpdf
{
//---------------------------------------------------------------------------//
/*!
 * Failure categories shared by the C++ core and the C API.
 *
 * The numeric values are part of the C ABI (see uncpdf.h) and must not be
 * reordered.
 */
enum class ErrorCode : int
{
    ok = 0,
    not_hermitian = 1,
    dim_mismatch = 2,
    dim_too_small = 3,
    degenerate_spectrum = 4,
    singular_gram = 5,
    non_monotone_edges = 6,
    wrong_variant = 7,
    non_qubit = 8,
    unsupported_dimension = 9,
    invalid_argument = 10,
    parse_error = 11,
    io_error = 12,
    internal = 13,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& what)
        : std::runtime_error(what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, std::string const& what)
{
    throw Error(code, what);
}

}  // namespace uncpdf
