#ifndef HOLO_RATIONAL_HPP
#define HOLO_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace holo {

// Exact scalar backend. The double backend is plain `double`; every linear
// routine is templated over the scalar and dispatches on scalar_traits.
using Rat = boost::multiprecision::cpp_rational;

struct structural_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invariant_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

template <class T> struct scalar_traits;

template <> struct scalar_traits<Rat> {
    static constexpr bool exact = true;
    static bool is_zero(const Rat& x, double /*tol*/ = 0.0) { return x == 0; }
};

template <> struct scalar_traits<double> {
    static constexpr bool exact = false;
    static bool is_zero(double x, double tol = 1e-12) { return x > -tol && x < tol; }
};

inline Rat parse_rat(const std::string& s) {
    try {
        return Rat(s);
    } catch (const std::exception&) {
        throw structural_error("cannot parse rational literal '" + s + "'");
    }
}

inline std::string to_string(const Rat& x) {
    return x.str();
}

} // namespace holo

#endif
