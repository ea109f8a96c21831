#include "deckmap/sphere.hpp"

#include <iomanip>
#include <sstream>

namespace deckmap {

const GaussianRational& SpherePoint::value() const {
    if (!value_) {
        throw Error(ErrorKind::InvalidArgument, "the point at infinity has no finite value");
    }
    return *value_;
}

SpherePoint SpherePoint::from_string(const std::string& text) {
    if (text == "inf" || text == "infinity" || text == "oo") {
        return infinity();
    }
    return SpherePoint(GaussianRational::from_string(text));
}

bool sphere_less(const SpherePoint& a, const SpherePoint& b) {
    if (a.is_infinity() || b.is_infinity()) {
        return !a.is_infinity() && b.is_infinity();
    }
    return lex_less(a.value(), b.value());
}

std::string PointValue::to_string() const {
    if (exact) {
        return exact->to_string();
    }
    if (approx.inf) {
        return "inf";
    }
    std::ostringstream os;
    os << std::setprecision(15) << approx.z.re << (approx.z.im < 0 ? "-" : "+") << std::abs(approx.z.im) << "i";
    return os.str();
}

bool same_point(const PointValue& a, const PointValue& b, double tol) {
    if (a.exact && b.exact) {
        return *a.exact == *b.exact;
    }
    return chordal(a.approx, b.approx) < tol;
}

bool same_point_set(const std::vector<PointValue>& a, const std::vector<PointValue>& b, double tol) {
    auto covered = [tol](const std::vector<PointValue>& x, const std::vector<PointValue>& y) {
        for (const auto& p : x) {
            bool found = false;
            for (const auto& q : y) {
                if (same_point(p, q, tol)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                return false;
            }
        }
        return true;
    };
    return covered(a, b) && covered(b, a);
}

} // namespace deckmap
