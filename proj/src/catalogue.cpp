#include "gmf/scenario.hpp"

#include <array>

namespace gmf {

namespace {

struct Entry {
    const char* name;
    const char* text;
};

// The built-in catalogue. Expected values carry a note recording where they
// come from: a hand computation, an independent brute-force search, or a
// standard identity.
constexpr std::array<Entry, 10> kCatalogue = {{

{"odd-knoerrer-point", R"(format = 1
name = "odd-knoerrer-point"

[bounds]
poly_bound = 10
window = "-6..6"

[ring]
coh_denominator = 1
aux_moduli = []

[[var]]
name = "x"
coh = 1
aux = []

[[object]]
name = "lp"
kind = "loop"
f = "x"

[[object]]
name = "lm"
kind = "loop"
f = "-x"

[[check]]
name = "endomorphisms of the positive loop"
op = "end_dims"
object = "lp"
expect = "0:1"
note = "rank computation from the alternating differential on x^n"

[[check]]
name = "endomorphisms of the negative loop"
op = "end_dims"
object = "lm"
expect = "0:1"
note = "same computation with the opposite sign"

[[check]]
name = "the two loops are orthogonal"
op = "ext_dims"
from = "lp"
to = "lm"
expect = "none"
note = "cross differential is injective degreewise"
)"},

{"clifford-split", R"(format = 1
name = "clifford-split"

[bounds]
poly_bound = 10
window = "-6..6"

[ring]
coh_denominator = 1
aux_moduli = []

[[var]]
name = "x"
coh = 1
aux = []

[[object]]
name = "K"
kind = "koszul"
f = "x"
g = "x"

[[object]]
name = "lp"
kind = "loop"
f = "x"

[[object]]
name = "lm"
kind = "loop"
f = "-x"

[[object]]
name = "S"
kind = "sum"
parts = "lp, lm"

[[check]]
name = "the Koszul object is valid"
op = "validate"
object = "K"
note = "square of the off-diagonal matrix"

[[check]]
name = "diagonalization certificate"
op = "iso"
a = "K"
b = "S"
expect = "found"
note = "base change by the 2x2 sign matrix"

[[check]]
name = "two-dimensional endomorphisms"
op = "end_dims"
object = "K"
expect = "0:2"
note = "sum of the two orthogonal loop objects"
)"},

{"kp-anticommuting", R"(format = 1
name = "kp-anticommuting"

[bounds]
poly_bound = 10
window = "-6..6"

[ring]
coh_denominator = 1
aux_moduli = []

[[var]]
name = "p"
coh = 1
aux = []

[[var]]
name = "q"
coh = 1
aux = []

[[sign]]
vars = ["p", "q"]
value = -1

[[object]]
name = "d1"
kind = "loop"
f = "p + q"

[[object]]
name = "d2"
kind = "loop"
f = "p - q"

[[check]]
name = "four rank-one generators"
op = "loop_search"
w = "p^2 + q^2"
expect_count = 4
orthogonal = "true"
note = "brute-force search over rational a p + b q with square p^2 + q^2"

[[check]]
name = "representative endomorphisms"
op = "end_dims"
object = "d1"
expect = "0:1"
note = "cross terms cancel by anticommutation"

[[check]]
name = "representatives are orthogonal"
op = "ext_dims"
from = "d1"
to = "d2"
expect = "none"
note = "hand expansion of the morphism differential"
)"},

{"cover-point-f1", R"(format = 1
name = "cover-point-f1"

[bounds]
poly_bound = 10
window = "-6..6"

[ring]
coh_denominator = 1
aux_moduli = []

[cover]
f = "1"
w = "0"
q = "q"
q_coh = 1
q_aux = []
y = "y"
y_coh = 0
y_aux = []

[[object]]
name = "B"
kind = "b_unit"
ring = "cover.b"

[[object]]
name = "lqp"
kind = "loop"
ring = "cover.a"
f = "q"

[[object]]
name = "lqm"
kind = "loop"
ring = "cover.a"
f = "-q"

[[check]]
name = "unit complex exact after the first term"
op = "cover_unit"
note = "degreewise ranks of the doubled-cover complex"

[[check]]
name = "counit is a Koszul factorization"
op = "cover_counit"
note = "contraction certificate for the comparison cone"

[[check]]
name = "deck transformation matches the fiber involution"
op = "cover_involution"
samples = "B"
note = "certificates for both composites"

[[check]]
name = "structure sheaf splits into the two loops"
op = "fm_split"
object = "B"
into = "lqp, lqm"
note = "base change by (1 plus-minus y)/2 diagonalizes the image"
)"},

{"cover-line-fa", R"(format = 1
name = "cover-line-fa"

[bounds]
poly_bound = 10
window = "-6..6"

[ring]
coh_denominator = 1
aux_moduli = []

[[var]]
name = "a"
coh = 0
aux = []

[cover]
f = "a"
w = "0"
q = "q"
q_coh = 1
q_aux = []
y = "y"
y_coh = 0
y_aux = []

[[object]]
name = "B"
kind = "b_unit"
ring = "cover.b"

[[check]]
name = "unit complex exact after the first term"
op = "cover_unit"
note = "degreewise ranks over the branched line"

[[check]]
name = "counit is a Koszul factorization"
op = "cover_counit"
note = "contraction certificate for the comparison cone"

[[check]]
name = "deck transformation matches the fiber involution"
op = "cover_involution"
samples = "B"
note = "certificate at the default bound"

[[check]]
name = "the image of the structure sheaf is a valid factorization"
op = "fm_valid"
object = "B"
note = "the connected cover does not split"
)"},

{"orbifold-z2", R"(format = 1
name = "orbifold-z2"

[bounds]
poly_bound = 10
window = "-6..6"

[ring]
coh_denominator = 1
aux_moduli = [2]

[[var]]
name = "x"
coh = 1
aux = [1]

[[object]]
name = "K"
kind = "koszul"
f = "x"
g = "x"

[[check]]
name = "no rank-one objects on the orbifold"
op = "loop_search"
w = "x^2"
expect_count = 0
note = "the weight-zero degree-one piece of the ring is empty"

[[check]]
name = "single exceptional generator"
op = "end_dims"
object = "K"
expect = "0:1"
note = "weight-restricted rank computation"

[[check]]
name = "generator is valid"
op = "validate"
object = "K"
note = "square of the off-diagonal matrix"
)"},

{"z2z2-quadric", R"(format = 1
name = "z2z2-quadric"

[bounds]
poly_bound = 10
window = "-6..6"

[ring]
coh_denominator = 1
aux_moduli = [2, 2]

[[var]]
name = "x"
coh = 1
aux = [1, 0]

[[var]]
name = "y"
coh = 1
aux = [0, 1]

[[object]]
name = "G"
kind = "matrix"
gens = "0, 0|1;0, 0|0;1, 0|1;1"
rows = "0, x, y, 0 / x, 0, 0, -y / y, 0, 0, x / 0, -y, x, 0"
w = "x^2 + y^2"

[[check]]
name = "no rank-one objects"
op = "loop_search"
w = "x^2 + y^2"
expect_count = 0
note = "no weight-zero degree-one elements exist"

[[check]]
name = "no rank-two factorizations"
op = "rank2_search"
w = "x^2 + y^2"
expect_count = 0
note = "brute-force search over small homogeneous pairs"

[[check]]
name = "the rank-four generator is a point"
op = "end_dims"
object = "G"
expect = "0:1"
note = "weight-restricted rank computation"
)"},

{"a2-kernel", R"(format = 1
name = "a2-kernel"

[bounds]
poly_bound = 10
window = "-4..5"

[ring]
coh_denominator = 1
aux_moduli = [2]

[[var]]
name = "x"
coh = 1
aux = [1]

[[var]]
name = "s"
coh = -1
aux = [1]

[cover]
f = "1"
w = "-x^3*s"
q = "y"
q_coh = 1
q_aux = [1]
y = "z"
y_coh = 0
y_aux = [1]

[[object]]
name = "K"
kind = "koszul"
ring = "cover.b"
f = "-x^3"
g = "s"

[[check]]
name = "kernel generator endomorphism algebra"
op = "end_algebra"
object = "K"
gen_degree = "1"
height = "3"
note = "nilpotency height three with a degree-one generator"

[[check]]
name = "unit complex exact after the first term"
op = "cover_unit"
note = "degreewise ranks over the quotient chart"

[[check]]
name = "counit is a Koszul factorization"
op = "cover_counit"
note = "contraction certificate for the comparison cone"
)"},

{"a3-kernel", R"(format = 1
name = "a3-kernel"

[bounds]
poly_bound = 10
window = "-6..6"

[ring]
coh_denominator = 1
aux_moduli = []

[[var]]
name = "gamma"
coh = 2
aux = []

[[var]]
name = "sigma"
coh = -2
aux = []

[cover]
f = "-gamma"
w = "gamma^2*sigma"
q = "chi"
q_coh = 0
q_aux = []
y = "zeta"
y_coh = 1
y_aux = []

[[object]]
name = "K"
kind = "koszul"
ring = "cover.b"
f = "gamma^2"
g = "sigma"

[[check]]
name = "boundary generator endomorphism algebra"
op = "end_algebra"
object = "K"
gen_degree = "1"
height = "4"
note = "nilpotency height four with a degree-one generator"

[[check]]
name = "counit is a Koszul factorization"
op = "cover_counit"
note = "even fiber coordinate; plain commuting copies"

[[check]]
name = "generator is valid"
op = "validate"
object = "K"
note = "the square rewrite turns zeta^4 into gamma^2"
)"},

{"even-model", R"(format = 1
name = "even-model"

[bounds]
poly_bound = 10
window = "-5..5"

[ring]
coh_denominator = 1
aux_moduli = [2]

[[var]]
name = "x"
coh = 1
aux = [1]

[cover]
f = "1"
w = "x^2"
q = "q"
q_coh = 1
q_aux = [1]
y = "y"
y_coh = 0
y_aux = [1]

[[object]]
name = "Gb"
kind = "loop"
ring = "cover.b"
f = "x*y"

[[object]]
name = "Ga"
kind = "fm_forward"
of = "Gb"

[[check]]
name = "generator transplants to the even model"
op = "validate"
object = "Ga"
note = "image has the doubled potential"

[[check]]
name = "endomorphism tables match across the equivalence"
op = "dims_match"
a = "Gb"
b = "Ga"
note = "both sides compute the same weight-zero ranks"

[[check]]
name = "the source generator is exceptional"
op = "end_dims"
object = "Gb"
expect = "0:1"
note = "alternating differential on the twisted powers"
)"},

}};

}  // namespace

std::vector<std::string> catalogue_names() {
    std::vector<std::string> names;
    for (const auto& e : kCatalogue) names.emplace_back(e.name);
    return names;
}

const std::string* catalogue_text(const std::string& name) {
    static std::map<std::string, std::string> cache;
    if (cache.empty()) {
        for (const auto& e : kCatalogue) cache[e.name] = e.text;
    }
    auto it = cache.find(name);
    return it == cache.end() ? nullptr : &it->second;
}

}  // namespace gmf
