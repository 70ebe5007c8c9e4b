#include "cake/json_io.hpp"

namespace cake {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("bad field '") + key + "': " + e.what());
  }
}

void to_json(Json& j, const Scalar& s) { j = s.str(); }

void from_json(const Json& j, Scalar& s) {
  if (j.is_number_integer()) {
    s = Scalar(j.get<long>());
    return;
  }
  if (!j.is_string()) throw ParseError("a number must be a string such as \"1/3\"");
  s = Scalar::parse(j.get<std::string>());
}

void to_json(Json& j, const Serving& s) {
  j = Json::array();
  for (const auto& iv : s.intervals()) j.push_back(Json::array({iv.lo, iv.hi}));
}

void from_json(const Json& j, Serving& s) {
  if (!j.is_array()) throw ParseError("a serving is a list of [lo, hi] pairs");
  std::vector<Interval> parts;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("a serving is a list of [lo, hi] pairs");
    parts.push_back({pair[0].get<Scalar>(), pair[1].get<Scalar>()});
  }
  s = Serving(std::move(parts));
}

void to_json(Json& j, const Query& q) {
  j = Json{{"cutter", q.cutter}, {"serving", q.serving}, {"proportion", q.proportion}};
}

void from_json(const Json& j, Query& q) {
  q.cutter = field<AgentId>(j, "cutter");
  q.serving = field<Serving>(j, "serving");
  q.proportion = field<Scalar>(j, "proportion");
}

void to_json(Json& j, const Record& r) {
  j = Json::array();
  for (const auto& e : r.entries) j.push_back(Json{{"serving", e.serving}, {"values", e.values}});
}

void from_json(const Json& j, Record& r) {
  if (!j.is_array()) throw ParseError("a record is a list of entries");
  r.entries.clear();
  for (const auto& e : j) r.entries.push_back({field<Serving>(e, "serving"), field<std::vector<Scalar>>(e, "values")});
}

void to_json(Json& j, const PartitionRecord& p) { j = Json{{"cells", p.cells}, {"values", p.values}}; }

void from_json(const Json& j, PartitionRecord& p) {
  p.cells = field<std::vector<Serving>>(j, "cells");
  p.values = field<std::vector<std::vector<Scalar>>>(j, "values");
}

void to_json(Json& j, const Allocation& x) { j = x.pieces; }

void from_json(const Json& j, Allocation& x) {
  if (!j.is_array()) throw ParseError("an allocation is a list of servings");
  x.pieces = j.get<std::vector<Serving>>();
}

Json to_json_document(const TranscriptDocument& doc) {
  const GameSetup& s = doc.setup;
  const Transcript& t = doc.transcript;
  Json j;
  j["schema"] = kTranscriptSchema;
  j["mode"] = to_string(t.mode);
  j["radicand"] = t.radicand;
  j["entitlements"] = t.entitlements;
  Json med{{"name", s.mediator.name}, {"seed", s.mediator.seed}};
  if (s.mediator.stop_after >= 0) med["stop_after"] = s.mediator.stop_after;
  j["mediator"] = med;
  if (s.adversary) {
    j["adversary"] = Json{{"kind", s.adversary->kind},
                          {"cstar", s.adversary->c_star},
                          {"schedule", to_string(s.adversary->schedule)}};
  }
  if (s.profile) j["profile"] = *s.profile;
  j["budget"] = s.budget;
  j["permissive"] = s.permissive;
  j["checked"] = s.checked;
  Json steps = Json::array();
  for (const auto& st : t.steps) {
    steps.push_back(Json{{"query", st.query}, {"response", st.response}, {"record", st.record}});
  }
  j["steps"] = steps;
  j["final"] = t.final ? Json(*t.final) : Json("unterminated");
  j["cost"] = t.cost;
  j["verdict"] = to_string(t.verdict);
  if (!t.detail.empty()) j["detail"] = t.detail;
  auto pay = payoff(t);
  j["payoff"] = pay ? Json(*pay) : Json("-inf");
  return j;
}

TranscriptDocument from_json_document(const Json& j) {
  if (!j.is_object()) throw ParseError("a transcript is a JSON object");
  std::string tag = field<std::string>(j, "schema");
  if (tag != kTranscriptSchema) throw ParseError("unsupported schema '" + tag + "'");
  TranscriptDocument doc;
  GameSetup& s = doc.setup;
  Transcript& t = doc.transcript;
  t.mode = s.mode = parse_game_mode(field<std::string>(j, "mode"));
  t.radicand = field<std::uint64_t>(j, "radicand");
  t.entitlements = s.entitlements = field<Entitlements>(j, "entitlements");
  const Json& med = j.at("mediator");
  s.mediator.name = field<std::string>(med, "name");
  s.mediator.seed = field<std::uint64_t>(med, "seed");
  if (med.contains("stop_after")) s.mediator.stop_after = field<long>(med, "stop_after");
  if (j.contains("adversary")) {
    const Json& adv = j.at("adversary");
    AdversarySetup a;
    a.kind = field<std::string>(adv, "kind");
    a.c_star = field<int>(adv, "cstar");
    a.schedule = parse_schedule_mode(field<std::string>(adv, "schedule"));
    s.adversary = a;
  }
  if (j.contains("profile")) s.profile = field<Profile>(j, "profile");
  s.budget = field<long>(j, "budget");
  s.permissive = field<bool>(j, "permissive");
  s.checked = field<bool>(j, "checked");
  for (const auto& st : field<Json>(j, "steps")) {
    t.steps.push_back({field<Query>(st, "query"), field<Record>(st, "response"), field<PartitionRecord>(st, "record")});
  }
  const Json& fin = j.at("final");
  if (!fin.is_string()) t.final = fin.get<Allocation>();
  t.cost = field<long>(j, "cost");
  t.verdict = parse_verdict(field<std::string>(j, "verdict"));
  if (j.contains("detail")) t.detail = field<std::string>(j, "detail");
  return doc;
}

}  // namespace cake

cake::KitchenMeasure nlohmann::adl_serializer<cake::KitchenMeasure>::from_json(const nlohmann::json& j) {
  return cake::KitchenMeasure(cake::field<std::vector<cake::Scalar>>(j, "breakpoints"),
                              cake::field<std::vector<cake::Scalar>>(j, "masses"));
}

void nlohmann::adl_serializer<cake::KitchenMeasure>::to_json(nlohmann::json& j, const cake::KitchenMeasure& m) {
  j = nlohmann::json{{"breakpoints", m.breakpoints()}, {"masses", m.masses()}};
}
