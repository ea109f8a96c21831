#include "deckmap/algebra.hpp"

#include "deckmap/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace deckmap {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::NumericFailure: return "numeric-failure";
    case ErrorKind::DegreeOverflow: return "degree-overflow";
    case ErrorKind::NotRepresentable: return "not-representable";
    case ErrorKind::SearchFailure: return "search-failure";
    case ErrorKind::NumericFalsePositive: return "numeric-false-positive";
    case ErrorKind::HypothesisViolation: return "hypothesis-violation";
    case ErrorKind::InternalError: return "internal-error";
    case ErrorKind::ParseError: return "syntax-error";
    case ErrorKind::UnboundParameter: return "unbound-parameter";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// GaussianRational

GaussianRational::GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
}

GaussianRational GaussianRational::inverse() const {
    if (is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "inverse of zero Gaussian rational");
    }
    Rational n = norm();
    return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
    if (o.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "division by zero Gaussian rational");
    }
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

namespace {

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (sgn(q) < 0) {
        return std::nullopt;
    }
    mpz_class num = q.get_num();
    mpz_class den = q.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) {
        return std::nullopt;
    }
    mpz_class rn;
    mpz_class rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return Rational(rn, rd);
}

std::string rational_string(const Rational& q) {
    return q.get_str();
}

} // namespace

std::optional<GaussianRational> GaussianRational::sqrt() const {
    if (is_zero()) {
        return GaussianRational(0);
    }
    // sqrt(a+bi) = x + iy with x = sqrt((|w|+a)/2), y = sign(b) sqrt((|w|-a)/2).
    auto modulus = rational_sqrt(norm());
    if (!modulus) {
        return std::nullopt;
    }
    auto x = rational_sqrt((*modulus + re_) / 2);
    auto y = rational_sqrt((*modulus - re_) / 2);
    if (!x || !y) {
        return std::nullopt;
    }
    Rational yy = sgn(im_) < 0 ? Rational(-*y) : *y;
    GaussianRational root(*x, yy);
    if (!(root * root == *this)) {
        return std::nullopt;
    }
    return root;
}

std::string GaussianRational::to_string() const {
    const bool has_re = sgn(re_) != 0;
    const bool has_im = sgn(im_) != 0;
    if (!has_im) {
        return rational_string(re_);
    }
    std::string out;
    if (has_re) {
        out = rational_string(re_);
        out += sgn(im_) < 0 ? "-" : "+";
    } else if (sgn(im_) < 0) {
        out = "-";
    }
    Rational mag = abs(im_);
    if (mag != 1) {
        out += rational_string(mag);
    }
    out += "i";
    return out;
}

GaussianRational GaussianRational::from_string(const std::string& text) {
    // Accepts the to_string() grammar: [re] [(+|-) [im]] i, rationals as p or p/q.
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) {
            s.push_back(ch);
        }
    }
    auto bad = [&]() { return Error(ErrorKind::InvalidArgument, "malformed Gaussian rational '" + text + "'"); };
    if (s.empty()) {
        throw bad();
    }
    auto parse_rational = [&](const std::string& part) -> Rational {
        if (part.empty()) {
            return 1;
        }
        Rational q;
        if (q.set_str(part, 10) != 0 || part.find_first_not_of("0123456789/") != std::string::npos) {
            throw bad();
        }
        if (q.get_den() == 0) {
            throw bad();
        }
        q.canonicalize();
        return q;
    };
    if (s.back() != 'i') {
        bool neg = s[0] == '-';
        Rational r = parse_rational(s.substr(neg || s[0] == '+' ? 1 : 0));
        return neg ? GaussianRational(-r) : GaussianRational(r);
    }
    s.pop_back();
    // split at the last sign that is not leading
    std::size_t split = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if (s[k] == '+' || s[k] == '-') {
            split = k;
            break;
        }
    }
    Rational re = 0;
    std::string im_part = s;
    if (split != std::string::npos) {
        std::string re_part = s.substr(0, split);
        bool neg = re_part[0] == '-';
        re = parse_rational(re_part.substr(neg || re_part[0] == '+' ? 1 : 0));
        if (neg) {
            re = -re;
        }
        im_part = s.substr(split);
    }
    bool neg = !im_part.empty() && im_part[0] == '-';
    if (!im_part.empty() && (im_part[0] == '-' || im_part[0] == '+')) {
        im_part = im_part.substr(1);
    }
    Rational im = parse_rational(im_part);
    return {re, neg ? Rational(-im) : im};
}

std::size_t GaussianRational::height_bits() const {
    auto bits = [](const mpz_class& z) { return mpz_sizeinbase(z.get_mpz_t(), 2); };
    return std::max({bits(re_.get_num()), bits(re_.get_den()), bits(im_.get_num()), bits(im_.get_den())});
}

// ---------------------------------------------------------------------------
// ComplexPoly

ComplexPoly::ComplexPoly(std::vector<GaussianRational> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

ComplexPoly::ComplexPoly(std::initializer_list<GaussianRational> coeffs) : coeffs_(coeffs) {
    trim();
}

ComplexPoly ComplexPoly::monomial(const GaussianRational& c, std::size_t power) {
    std::vector<GaussianRational> v(power + 1);
    v[power] = c;
    return ComplexPoly(std::move(v));
}

ComplexPoly ComplexPoly::linear_factor(const GaussianRational& root) {
    return ComplexPoly({-root, GaussianRational(1)});
}

void ComplexPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) {
        coeffs_.pop_back();
    }
}

std::optional<std::size_t> ComplexPoly::degree() const {
    if (coeffs_.empty()) {
        return std::nullopt;
    }
    return coeffs_.size() - 1;
}

GaussianRational ComplexPoly::coeff(std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : GaussianRational(0);
}

const GaussianRational& ComplexPoly::leading() const {
    if (coeffs_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "leading coefficient of the zero polynomial");
    }
    return coeffs_.back();
}

GaussianRational ComplexPoly::operator()(const GaussianRational& z) const {
    GaussianRational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc *= z;
        acc += *it;
    }
    return acc;
}

ComplexPoly ComplexPoly::derivative() const {
    if (coeffs_.size() <= 1) {
        return {};
    }
    std::vector<GaussianRational> out(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        out[k - 1] = coeffs_[k] * GaussianRational(static_cast<long>(k));
    }
    return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::monic() const {
    if (coeffs_.empty()) {
        return {};
    }
    return scaled(leading().inverse());
}

ComplexPoly ComplexPoly::scaled(const GaussianRational& c) const {
    std::vector<GaussianRational> out(coeffs_);
    for (auto& x : out) {
        x *= c;
    }
    return ComplexPoly(std::move(out));
}

ComplexPoly ComplexPoly::reversed(std::size_t n) const {
    std::vector<GaussianRational> out(n + 1);
    for (std::size_t k = 0; k < coeffs_.size() && k <= n; ++k) {
        out[n - k] = coeffs_[k];
    }
    return ComplexPoly(std::move(out));
}

ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<GaussianRational> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k < a.coeffs_.size()) {
            out[k] += a.coeffs_[k];
        }
        if (k < b.coeffs_.size()) {
            out[k] += b.coeffs_[k];
        }
    }
    return ComplexPoly(std::move(out));
}

ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<GaussianRational> out(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t k = 0; k < out.size(); ++k) {
        if (k < a.coeffs_.size()) {
            out[k] += a.coeffs_[k];
        }
        if (k < b.coeffs_.size()) {
            out[k] -= b.coeffs_[k];
        }
    }
    return ComplexPoly(std::move(out));
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
    if (a.is_zero() || b.is_zero()) {
        return {};
    }
    std::vector<GaussianRational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
            out[i + j] += a.coeffs_[i] * b.coeffs_[j];
        }
    }
    return ComplexPoly(std::move(out));
}

std::string ComplexPoly::to_string(const std::string& var) const {
    if (coeffs_.empty()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
        const auto& c = coeffs_[k];
        if (c.is_zero()) {
            continue;
        }
        if (!first) {
            os << " + ";
        }
        first = false;
        if (k == 0) {
            os << "(" << c.to_string() << ")";
            continue;
        }
        if (!(c == GaussianRational(1))) {
            os << "(" << c.to_string() << ")*";
        }
        os << var;
        if (k > 1) {
            os << "^" << k;
        }
    }
    return os.str();
}

ComplexPoly poly_arith(const ComplexPoly& a, const ComplexPoly& b, PolyOp op) {
    switch (op) {
    case PolyOp::Add: return a + b;
    case PolyOp::Sub: return a - b;
    case PolyOp::Mul: return a * b;
    }
    return {};
}

PolyDivision poly_divmod(const ComplexPoly& a, const ComplexPoly& b) {
    if (b.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
    }
    if (a.is_zero() || *a.degree() < *b.degree()) {
        return {ComplexPoly(), a};
    }
    const std::size_t db = *b.degree();
    std::vector<GaussianRational> rem(a.coeffs());
    std::vector<GaussianRational> quot(rem.size() - db);
    const GaussianRational inv_lead = b.leading().inverse();
    for (std::size_t k = rem.size(); k-- > db;) {
        if (rem[k].is_zero()) {
            continue;
        }
        GaussianRational q = rem[k] * inv_lead;
        for (std::size_t j = 0; j <= db; ++j) {
            rem[k - db + j] -= q * b.coeffs()[j];
        }
        quot[k - db] = std::move(q);
    }
    rem.resize(db);
    return {ComplexPoly(std::move(quot)), ComplexPoly(std::move(rem))};
}

ComplexPoly poly_gcd(const ComplexPoly& a, const ComplexPoly& b) {
    if (a.is_zero() && b.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "gcd of two zero polynomials");
    }
    ComplexPoly x = a.monic();
    ComplexPoly y = b.monic();
    while (!y.is_zero()) {
        ComplexPoly r = poly_divmod(x, y).remainder;
        x = std::move(y);
        y = r.monic();
    }
    return x.monic();
}

ComplexPoly poly_exact_div(const ComplexPoly& a, const ComplexPoly& b) {
    auto [q, r] = poly_divmod(a, b);
    if (!r.is_zero()) {
        throw Error(ErrorKind::InternalError, "inexact polynomial division");
    }
    return q;
}

ComplexPoly poly_homogeneous_substitute(const ComplexPoly& outer, const ComplexPoly& num,
                                        const ComplexPoly& den, std::size_t n) {
    if (outer.is_zero()) {
        return {};
    }
    if (*outer.degree() > n) {
        throw Error(ErrorKind::InvalidArgument, "homogenizing degree below polynomial degree");
    }
    // Powers num^i and den^(n-i), i = 0..n.
    std::vector<ComplexPoly> num_pow(n + 1);
    std::vector<ComplexPoly> den_pow(n + 1);
    num_pow[0] = ComplexPoly::constant(1);
    den_pow[0] = ComplexPoly::constant(1);
    for (std::size_t i = 1; i <= n; ++i) {
        num_pow[i] = num_pow[i - 1] * num;
        den_pow[i] = den_pow[i - 1] * den;
    }
    ComplexPoly acc;
    const auto& c = outer.coeffs();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i].is_zero()) {
            continue;
        }
        acc = acc + (num_pow[i] * den_pow[n - i]).scaled(c[i]);
    }
    return acc;
}

HomogeneousPair poly_compose(const ComplexPoly& outer, const ComplexPoly& num, const ComplexPoly& den) {
    if (den.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "composition with zero denominator");
    }
    const std::size_t n = outer.degree_or_zero();
    ComplexPoly den_pow = ComplexPoly::constant(1);
    for (std::size_t i = 0; i < n; ++i) {
        den_pow = den_pow * den;
    }
    return {poly_homogeneous_substitute(outer, num, den, n), den_pow};
}

std::vector<ComplexPoly> squarefree_decomposition(const ComplexPoly& p) {
    if (p.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "square-free decomposition of zero");
    }
    std::vector<ComplexPoly> factors;
    if (*p.degree() == 0) {
        return factors;
    }
    // Yun's algorithm (characteristic zero).
    const ComplexPoly m = p.monic();
    const ComplexPoly dm = m.derivative();
    const ComplexPoly a = poly_gcd(m, dm);
    ComplexPoly b = poly_exact_div(m, a);
    ComplexPoly c = poly_exact_div(dm, a);
    ComplexPoly d = c - b.derivative();
    while (*b.degree() > 0) {
        ComplexPoly g = poly_gcd(b, d);
        factors.push_back(g);
        b = poly_exact_div(b, g);
        c = poly_exact_div(d, g);
        d = c - b.derivative();
    }
    while (!factors.empty() && *factors.back().degree() == 0) {
        factors.pop_back();
    }
    return factors;
}

std::size_t root_multiplicity(const ComplexPoly& p, const GaussianRational& z) {
    if (p.is_zero()) {
        throw Error(ErrorKind::InvalidArgument, "root multiplicity in the zero polynomial");
    }
    std::size_t m = 0;
    ComplexPoly q = p;
    const ComplexPoly lin = ComplexPoly::linear_factor(z);
    while (!q.is_zero() && *q.degree() > 0 && q(z).is_zero()) {
        q = poly_exact_div(q, lin);
        ++m;
    }
    return m;
}

} // namespace deckmap
