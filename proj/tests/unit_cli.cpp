#include "doctest.h"
#include "generators.hpp"

#include "deckmap/error.hpp"
#include "deckmap/parse.hpp"
#include "deckmap/report.hpp"

#include <optional>
#include <string>

using namespace deckmap;

namespace {

GaussianRational q(long n, long d = 1) {
    return {Rational(n, d), Rational(0)};
}

ErrorKind kind_of(const std::string& src, const ParamBindings& params = {}) {
    try {
        parse_map(src, params);
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InternalError;
}

std::size_t parse_error_position(const std::string& src) {
    try {
        parse_map(src);
    } catch (const ParseError& e) {
        return e.position();
    }
    return std::string::npos;
}

// Random expression text together with its exact value at a sample point.
struct Sample {
    std::string text;
    GaussianRational value;
};

class ExprGen {
public:
    ExprGen(gen::Rng& rng, GaussianRational z0) : rng_(rng), z0_(std::move(z0)) {}

    Sample expr(int depth) {
        long pick = gen::uniform(rng_, 0, depth <= 0 ? 1 : 6);
        switch (pick) {
        case 0:
            return {"z", z0_};
        case 1:
            return literal();
        case 2: {
            Sample a = expr(depth - 1), b = expr(depth - 1);
            return {"(" + a.text + " + " + b.text + ")", a.value + b.value};
        }
        case 3: {
            Sample a = expr(depth - 1), b = expr(depth - 1);
            return {"(" + a.text + " - " + b.text + ")", a.value - b.value};
        }
        case 4: {
            Sample a = expr(depth - 1), b = expr(depth - 1);
            return {a.text + "*" + b.text, a.value * b.value};
        }
        case 5: {
            Sample a = expr(depth - 1);
            Sample b = expr(depth - 1);
            while (b.value.is_zero()) {
                b = literal();
            }
            return {"(" + a.text + ")/(" + b.text + ")", a.value / b.value};
        }
        default: {
            Sample a = expr(depth - 1);
            long e = gen::uniform(rng_, 0, 3);
            GaussianRational v(1);
            for (long j = 0; j < e; ++j) {
                v = v * a.value;
            }
            return {"(" + a.text + ")^" + std::to_string(e), v};
        }
        }
    }

private:
    Sample literal() {
        long n = gen::uniform(rng_, 1, 9), d = gen::uniform(rng_, 1, 4);
        GaussianRational v = q(n, d);
        std::string text = std::to_string(n) + (d > 1 ? "/" + std::to_string(d) : "");
        switch (gen::uniform(rng_, 0, 3)) {
        case 0:
            return {text, v};
        case 1:
            return {"(-" + text + ")", -v};
        case 2:
            return {text + "i", v * GaussianRational(0, 1)};
        default:
            return {"(" + text + " + i)", v + GaussianRational(0, 1)};
        }
    }

    gen::Rng& rng_;
    GaussianRational z0_;
};

} // namespace

TEST_CASE("parse_map examples") {
    CHECK(parse_map("(z^2-a)/(z^2+a)", {{"a", 2}}) == gen::f_a(2));
    RationalMap fc = parse_map("c*(z + 1/z)", {{"c", q(3, 5)}});
    CHECK(fc == RationalMap(ComplexPoly({q(3, 5), 0, q(3, 5)}), ComplexPoly({0, 1})));
    CHECK(parse_map("z^2") == gen::power_map(2));
    CHECK(parse_map("-z^2") == RationalMap(ComplexPoly({0, 0, -1}), ComplexPoly({1})));
    CHECK(parse_map("2^2*z") == parse_map("4*z"));
    CHECK(parse_map("(z+1)^2/(z+1)") == parse_map("z+1"));
}

TEST_CASE("literal syntax") {
    GaussianRational three_halves_i(0, Rational(3, 2));
    CHECK(parse_map("3/2i*z^2") == RationalMap(ComplexPoly({0, 0, three_halves_i}), ComplexPoly({1})));
    CHECK(parse_map("(2+3i)*z^2") == RationalMap(ComplexPoly({0, 0, GaussianRational(2, 3)}), ComplexPoly({1})));
    CHECK(parse_map("1/4i*z^2") == parse_map("(i/4)*z^2"));
    CHECK(parse_map("0.25*z^2") == parse_map("(1/4)*z^2"));
    CHECK(parse_map("i*i*z^2") == parse_map("-z^2"));
}

TEST_CASE("precedence") {
    // unary minus binds looser than ^
    CHECK(parse_map("-z^2 + 0*z") == parse_map("-(z^2)"));
    CHECK(parse_map("2*z^2/4") == parse_map("(1/2)*z^2"));
    CHECK(parse_map("z^2 - z - 1") == parse_map("(z^2 - z) - 1"));
}

TEST_CASE("parse errors") {
    CHECK(kind_of("z^2 +") == ErrorKind::ParseError);
    CHECK(kind_of("(z^2") == ErrorKind::ParseError);
    CHECK(kind_of("z^-1") == ErrorKind::ParseError);
    CHECK(kind_of("z^1.5") == ErrorKind::ParseError);
    CHECK(kind_of("z^a") == ErrorKind::ParseError);
    CHECK(kind_of("z $ 2") == ErrorKind::ParseError);
    CHECK(kind_of("a*z^2") == ErrorKind::UnboundParameter);
    CHECK(kind_of("1/(z-z)") == ErrorKind::InvalidArgument);
    CHECK(kind_of("z^2/(a-2)", {{"a", 2}}) == ErrorKind::InvalidArgument);
    CHECK(parse_error_position("z^2 + $") == 6);
    CHECK(parse_error_position("(z^2") == 4);
}

TEST_CASE("parameters and bindings") {
    MapExpression e = MapExpression::parse("(z^2 - a)/(b*z^2 + a)");
    CHECK(e.parameters() == std::set<std::string>{"a", "b"});
    auto [name, value] = parse_binding("a=1/2+i");
    CHECK(name == "a");
    CHECK(value == GaussianRational(Rational(1, 2), 1));
    CHECK_THROWS_AS(parse_binding("a"), Error);
    CHECK_THROWS_AS(parse_binding("=3"), Error);
}

TEST_CASE("random expressions evaluate exactly and round trip") {
    gen::Rng rng(91);
    int checked = 0;
    while (checked < 100) {
        GaussianRational z0(Rational(gen::uniform(rng, -7, 7), 3), Rational(gen::uniform(rng, -7, 7), 5));
        ExprGen g(rng, z0);
        Sample s = g.expr(3);
        std::optional<RationalMap> parsed;
        try {
            parsed = parse_map(s.text);
        } catch (const Error& e) {
            // an identically zero denominator can only come from cancellation
            CHECK(e.kind() == ErrorKind::InvalidArgument);
            continue;
        }
        const RationalMap& f = *parsed;
        CAPTURE(s.text);
        CHECK(ratmap_eval(f, SpherePoint(z0)) == SpherePoint(s.value));
        CHECK(parse_map(f.to_string()) == f);
        ++checked;
    }
}

TEST_CASE("random maps round trip through their printed form") {
    gen::Rng rng(92);
    for (int t = 0; t < 100; ++t) {
        RationalMap f = gen::bicritical(rng, 2 + t % 3, t % 2 == 0);
        CHECK(parse_map(f.to_string()) == f);
    }
}

TEST_CASE("report JSON") {
    RationalMap f = gen::f_a(q(-3, 7));
    Json m = to_json(f);
    CHECK(m["degree"] == 2);
    CHECK(m["num"][0] == "3/7");
    CHECK(m["den"][0] == "-3/7");

    Json p = to_json(PointValue(SpherePoint::infinity()));
    CHECK(p["exact"] == "inf");
    CHECK(p["approx"] == "inf");

    Json cd = to_json(critical_data(f));
    for (const char* key : {"points", "values", "exact", "bicritical", "power_map", "critically_coalescing"}) {
        CHECK(cd.contains(key));
    }
    CHECK(cd["critically_coalescing"] == true);

    Json env = report_envelope("deck");
    CHECK(env["schema"] == "deckmap/1");
    CHECK(env["command"] == "deck");

    Json err = error_report(ErrorKind::ParseError, "bad");
    CHECK(err["error"]["kind"] == "syntax-error");
    CHECK_FALSE(err.contains("command"));

    RenderSpec spec;
    Json js = to_json(spec);
    CHECK(js["target"] == "param_fa");
    CHECK(js["window"]["half_width"] == 4.0);
}
