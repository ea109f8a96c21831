#include "deckmap/report.hpp"

#include <map>

namespace deckmap {

namespace {

Json complex_json(const Complex<double>& z) {
    return Json::array({z.re, z.im});
}

Json approx_json(const NumPoint<double>& p) {
    if (p.inf) {
        return "inf";
    }
    return complex_json(p.z);
}

Json coeffs_json(const ComplexPoly& p) {
    Json out = Json::array();
    for (const auto& c : p.coeffs()) {
        out.push_back(c.to_string());
    }
    return out;
}

Json points_json(const std::vector<PointValue>& pts) {
    Json out = Json::array();
    for (const auto& p : pts) {
        out.push_back(to_json(p));
    }
    return out;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

} // namespace

Json to_json(const PointValue& p) {
    Json out;
    out["exact"] = p.exact ? Json(p.exact->to_string()) : Json(nullptr);
    out["approx"] = approx_json(p.approx);
    return out;
}

Json to_json(const RationalMap& f) {
    Json out;
    out["expr"] = f.to_string();
    out["degree"] = f.degree();
    out["num"] = coeffs_json(f.num());
    out["den"] = coeffs_json(f.den());
    return out;
}

Json to_json(const MobiusTransform& t) {
    Json out;
    out["expr"] = t.to_string();
    Json c = Json::array();
    for (const auto& e : t.entries()) {
        c.push_back(e.to_string());
    }
    out["coefficients"] = c;
    return out;
}

Json to_json(const GroupElement& e) {
    Json out;
    out["order"] = e.order;
    out["certified"] = e.certified;
    out["exact"] = e.exact ? to_json(*e.exact) : Json(nullptr);
    Json approx = Json::array();
    for (const auto& m : e.approx.m) {
        approx.push_back(complex_json(m));
    }
    out["approx"] = approx;
    return out;
}

Json to_json(const MobiusGroup& g) {
    Json out;
    out["iso_type"] = g.iso.to_string();
    out["order"] = g.size();
    out["all_certified"] = g.all_certified();
    Json els = Json::array();
    for (const auto& e : g.elements) {
        els.push_back(to_json(e));
    }
    out["elements"] = els;
    out["order_census"] = g.order_census();
    return out;
}

Json to_json(const CriticalData& cd) {
    Json out;
    Json pts = Json::array();
    for (std::size_t i = 0; i < cd.points.size(); ++i) {
        Json p = to_json(cd.points[i].point);
        p["multiplicity"] = cd.points[i].multiplicity;
        p["value"] = to_json(cd.values[i]);
        pts.push_back(p);
    }
    out["points"] = pts;
    out["values"] = points_json(cd.value_set());
    out["exact"] = cd.exact;
    out["bicritical"] = cd.bicritical;
    out["power_map"] = cd.power_map;
    out["critically_coalescing"] = optional_json(cd.critically_coalescing);
    return out;
}

Json to_json(const PostcriticalOrbit& po) {
    Json out;
    out["postcritically_finite"] = po.postcritically_finite;
    Json orbits = Json::array();
    for (const auto& o : po.orbits) {
        Json j;
        j["orbit"] = points_json(o.orbit);
        j["preperiod"] = optional_json(o.preperiod);
        j["period"] = optional_json(o.period);
        j["fixed_point"] = o.fixed_point ? to_json(*o.fixed_point) : Json(nullptr);
        j["steps_to_fixed"] = optional_json(o.steps_to_fixed);
        j["height_cap_hit"] = o.height_cap_hit;
        orbits.push_back(j);
    }
    out["orbits"] = orbits;
    out["alpha"] = po.alpha ? to_json(*po.alpha) : Json(nullptr);
    out["m"] = optional_json(po.m);
    return out;
}

Json to_json(const DeckResult& dr) {
    Json out;
    out["k"] = dr.k;
    out["map_degree"] = dr.map_degree;
    out["precision_bits"] = dr.precision_bits;
    out["iso_type_confirmed"] = dr.iso_type_confirmed;
    out["restricted_to_certified"] = dr.restricted_to_certified;
    Json base = Json::array();
    for (const auto& b : dr.base_points) {
        base.push_back(b.to_string());
    }
    out["base_points"] = base;
    out["group"] = to_json(dr.group);
    if (dr.special_pairs) {
        Json pairs = Json::array();
        for (const auto& sp : *dr.special_pairs) {
            Json j;
            j["points"] = points_json({sp.points[0], sp.points[1]});
            j["involution"] = sp.involution;
            pairs.push_back(j);
        }
        out["special_pairs"] = pairs;
    } else {
        out["special_pairs"] = nullptr;
    }
    return out;
}

Json to_json(const DetectionReport& r) {
    Json out;
    out["case"] = to_string(r.case_label);
    out["critical_points"] = points_json({r.critical_points[0], r.critical_points[1]});
    out["critical_values"] = points_json({r.critical_values[0], r.critical_values[1]});
    const auto& ev = r.evidence;
    Json e;
    e["deck_iso_type"] = ev.deck_iso.to_string();
    e["deck_confirmed"] = ev.deck_confirmed;
    e["deck_element"] = optional_json(ev.deck_element);
    e["all_critical_fibers"] = points_json(ev.all_critical_fibers);
    e["special_pair_images"] = points_json(ev.special_pair_images);
    e["alpha"] = ev.alpha ? to_json(*ev.alpha) : Json(nullptr);
    e["beta"] = ev.beta ? to_json(*ev.beta) : Json(nullptr);
    e["m"] = optional_json(ev.m);
    if (ev.cross_ratio) {
        Json cr;
        cr["value"] = to_json(ev.cross_ratio->value);
        cr["exact"] = ev.cross_ratio->exact;
        cr["equals_minus_one"] = ev.cross_ratio->equals_minus_one;
        cr["root_of_x2_6x_1"] = ev.cross_ratio->root_of_x2_6x_1;
        e["cross_ratio"] = cr;
    } else {
        e["cross_ratio"] = nullptr;
    }
    Json counts = Json::array();
    for (const auto& fc : ev.fiber_counts) {
        Json j = to_json(fc.point);
        j["critical_points"] = fc.critical_points;
        counts.push_back(j);
    }
    e["fiber_counts"] = counts;
    out["evidence"] = e;
    return out;
}

Json to_json(const SharedIterateReport& r) {
    Json out;
    out["max_k"] = r.max_k;
    out["minimal_k"] = optional_json(r.minimal_k);
    out["cv_cp_agree"] = r.cv_cp_agree;
    out["agreement_violation"] = r.agreement_violation;
    out["second_iterate_equal"] = r.second_iterate_equal;
    out["involution_mu"] = r.involution_mu ? to_json(*r.involution_mu) : Json(nullptr);
    out["mu_is_involution"] = r.mu_is_involution;
    out["mu_commutes_with_f"] = r.mu_commutes_with_f;
    out["mu_transposes_critical_points"] = r.mu_transposes_critical_points;
    out["mu_transposes_critical_values"] = r.mu_transposes_critical_values;
    out["symmetry_locus_member"] = r.symmetry_locus_member;
    out["critical_points_f"] = points_json(r.critical_points_f);
    out["critical_points_g"] = points_json(r.critical_points_g);
    out["critical_values_f"] = points_json(r.critical_values_f);
    out["critical_values_g"] = points_json(r.critical_values_g);
    return out;
}

Json to_json(const CycleAtlas& atlas) {
    Json out = Json::array();
    for (const auto& c : atlas.cycles) {
        Json j;
        j["period"] = c.period;
        j["multiplier"] = c.multiplier;
        j["seed"] = c.seed;
        Json pts = Json::array();
        for (const auto& p : c.points) {
            pts.push_back(approx_json(p));
        }
        j["points"] = pts;
        out.push_back(j);
    }
    return out;
}

Json to_json(const RenderSpec& spec) {
    Json out;
    out["target"] = to_string(spec.target);
    out["map"] = spec.map ? to_json(*spec.map) : Json(nullptr);
    Window w = spec.effective_window();
    out["window"] = {{"center", Json::array({w.center_re, w.center_im})}, {"half_width", w.half_width}};
    out["width"] = spec.width;
    out["height"] = spec.height;
    out["max_iter"] = spec.max_iter;
    out["cycle_eps"] = spec.cycle_eps;
    out["max_period"] = spec.max_period;
    out["palette"] = to_string(spec.palette);
    out["overlay_critical_orbits"] = spec.overlay_critical_orbits;
    return out;
}

Json render_metadata(const RenderSpec& spec, const RenderResult& r) {
    Json out;
    out["spec"] = to_json(spec);
    out["atlas"] = to_json(r.atlas);
    Json marks = Json::array();
    for (const auto& m : r.overlay) {
        marks.push_back({{"x", m.x}, {"y", m.y}, {"cycle", m.cycle}});
    }
    out["overlay"] = marks;
    std::map<std::int32_t, std::size_t> hist;
    for (auto c : r.classes) {
        ++hist[c];
    }
    Json classes = Json::array();
    for (const auto& [c, n] : hist) {
        classes.push_back({{"class", c}, {"pixels", n}});
    }
    out["classes"] = classes;
    out["seconds"] = r.seconds;
    return out;
}

Json report_envelope(const std::string& command) {
    Json out;
    out["schema"] = kReportSchema;
    out["command"] = command;
    return out;
}

Json error_report(ErrorKind kind, const std::string& message) {
    Json out;
    out["schema"] = kReportSchema;
    out["error"] = {{"kind", std::string(to_string(kind))}, {"message", message}};
    return out;
}

} // namespace deckmap
