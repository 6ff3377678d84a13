#include "qoffload/gates.hpp"

#include "qoffload/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qoffload {

namespace {

GateMatrix one(cplx a, cplx b, cplx c, cplx d) {
    GateMatrix g;
    g.dim = 2;
    g.m[0] = a;
    g.m[1] = b;
    g.m[2] = c;
    g.m[3] = d;
    return g;
}

GateMatrix two_from_rows(const std::array<std::array<cplx, 4>, 4>& rows) {
    GateMatrix g;
    g.dim = 4;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) g(r, c) = rows[r][c];
    return g;
}

}  // namespace

GateMatrix gate_matrix(GateKind kind, std::optional<double> param) {
    if (is_rotation(kind) != param.has_value()) {
        throw Error(Errc::BadParameter, std::string(mnemonic(kind)) +
                                            (param ? ": unexpected parameter"
                                                   : ": missing angle parameter"));
    }
    using std::numbers::sqrt2;
    const cplx i{0.0, 1.0};
    const double r = 1.0 / sqrt2;
    switch (kind) {
        case GateKind::H: return one(r, r, r, -r);
        case GateKind::X: return one(0, 1, 1, 0);
        case GateKind::Y: return one(0, -i, i, 0);
        case GateKind::Z: return one(1, 0, 0, -1);
        case GateKind::S: return one(1, 0, 0, i);
        case GateKind::SDG: return one(1, 0, 0, -i);
        case GateKind::T: return one(1, 0, 0, cplx{r, r});
        case GateKind::TDG: return one(1, 0, 0, cplx{r, -r});
        case GateKind::RX: {
            const double c = std::cos(*param / 2), s = std::sin(*param / 2);
            return one(c, -i * s, -i * s, c);
        }
        case GateKind::RY: {
            const double c = std::cos(*param / 2), s = std::sin(*param / 2);
            return one(c, -s, s, c);
        }
        case GateKind::RZ: {
            const double h = *param / 2;
            return one(std::polar(1.0, -h), 0, 0, std::polar(1.0, h));
        }
        case GateKind::CX:
            return two_from_rows({{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}});
        case GateKind::CZ:
            return two_from_rows({{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, -1}}});
        case GateKind::SWAP:
            return two_from_rows({{{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}});
    }
    throw Error(Errc::InvalidArgument, "unknown gate kind");
}

}  // namespace qoffload
