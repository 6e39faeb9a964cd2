#pragma once

#include <compare>
#include <string>
#include <vector>

namespace gmf {

// A degree is a cohomological part plus a tuple of auxiliary equivariant
// weights. The cohomological part is stored as a numerator over a fixed
// scenario-wide denominator held by the ring, so addition is integer
// addition and never touches the denominator. An auxiliary entry with
// modulus d lives in [0, d); modulus 0 means a free (integer) factor.
struct DegreeVector {
    long long coh = 0;
    std::vector<int> aux;

    friend bool operator==(const DegreeVector&, const DegreeVector&) = default;
    friend auto operator<=>(const DegreeVector&, const DegreeVector&) = default;
};

inline DegreeVector degree_zero(size_t aux_factors) {
    return DegreeVector{0, std::vector<int>(aux_factors, 0)};
}

std::string to_string(const DegreeVector& d);

}  // namespace gmf
