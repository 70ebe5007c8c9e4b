#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "cake/arena.hpp"

namespace cake {

using Json = nlohmann::json;

inline constexpr const char* kTranscriptSchema = "cake-transcript/1";

// Scalars travel as their text form ("3/5", "-1/2+1/2√5"), servings as lists
// of [lo, hi] pairs.
void to_json(Json& j, const Scalar& s);
void from_json(const Json& j, Scalar& s);
void to_json(Json& j, const Serving& s);
void from_json(const Json& j, Serving& s);
void to_json(Json& j, const Query& q);
void from_json(const Json& j, Query& q);
void to_json(Json& j, const Record& r);
void from_json(const Json& j, Record& r);
void to_json(Json& j, const PartitionRecord& p);
void from_json(const Json& j, PartitionRecord& p);
void to_json(Json& j, const Allocation& x);
void from_json(const Json& j, Allocation& x);

struct AdversarySetup {
  std::string kind = "sigma";  // sigma | nature
  int c_star = 2;
  ScheduleMode schedule = ScheduleMode::paper;
};

// Everything needed to re-run a match.
struct GameSetup {
  GameMode mode = GameMode::division;
  Entitlements entitlements;
  MediatorSpec mediator;
  std::optional<AdversarySetup> adversary;
  std::optional<Profile> profile;  // division games and nature adversaries
  long budget = kDefaultBudget;
  bool permissive = false;
  bool checked = false;
};

struct TranscriptDocument {
  GameSetup setup;
  Transcript transcript;
};

Json to_json_document(const TranscriptDocument& doc);
// Throws ParseError on a wrong schema tag or a malformed field.
TranscriptDocument from_json_document(const Json& j);

}  // namespace cake

// KitchenMeasure has no default state, so it needs the by-value form.
template <>
struct nlohmann::adl_serializer<cake::KitchenMeasure> {
  static cake::KitchenMeasure from_json(const nlohmann::json& j);
  static void to_json(nlohmann::json& j, const cake::KitchenMeasure& m);
};
