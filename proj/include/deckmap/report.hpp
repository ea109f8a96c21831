#pragma once

// JSON documents for the command-line reports ("schema": "deckmap/1").
// Exact numbers are strings; floating values are [re, im] pairs.

#include "deckmap/deck.hpp"
#include "deckmap/detect.hpp"
#include "deckmap/dynren.hpp"
#include "deckmap/error.hpp"
#include "deckmap/mobius.hpp"
#include "deckmap/ratmap.hpp"

#include <json.hpp>

#include <string>

namespace deckmap {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "deckmap/1";

Json to_json(const PointValue& p);
Json to_json(const RationalMap& f);
Json to_json(const MobiusTransform& t);
Json to_json(const GroupElement& e);
Json to_json(const MobiusGroup& g);
Json to_json(const CriticalData& cd);
Json to_json(const PostcriticalOrbit& po);
Json to_json(const DeckResult& dr);
Json to_json(const DetectionReport& r);
Json to_json(const SharedIterateReport& r);
Json to_json(const CycleAtlas& atlas);
Json to_json(const RenderSpec& spec);

/// Spec echo, atlas, overlay marks, class histogram and timing.
Json render_metadata(const RenderSpec& spec, const RenderResult& r);

/// {"schema": ..., "command": command}
Json report_envelope(const std::string& command);

/// {"schema": ..., "error": {"kind": ..., "message": ...}}
Json error_report(ErrorKind kind, const std::string& message);

} // namespace deckmap
