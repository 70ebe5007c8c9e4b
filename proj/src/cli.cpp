#include "cake/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace cake {

namespace {

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::accepted:
      return 0;
    case Verdict::rejected:
    case Verdict::budget_exceeded:
      return 1;
    case Verdict::fault:
      return 2;
  }
  return 2;
}

std::string text(const Serving& s) {
  if (s.empty()) return "{}";
  std::string out;
  for (const auto& iv : s.intervals()) {
    if (!out.empty()) out += " u ";
    out += "(" + iv.lo.str() + "," + iv.hi.str() + "]";
  }
  return out;
}

std::string payoff_text(const Transcript& t) {
  auto p = payoff(t);
  return p ? std::to_string(*p) : "-inf";
}

// Left-aligned columns separated by two spaces.
void print_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

Json read_json(const std::string& path) {
  if (path.empty()) throw ConfigError("this command needs an input file (-i)");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("'" + path + "' is not JSON: " + e.what());
  }
}

// Writes `doc` where the config asks for it; prints it when --json is set.
void emit(const RunConfig& cfg, const Json& doc, const std::string& name, std::ostream& out) {
  std::string path = cfg.output;
  if (path.empty()) {
    if (const char* dir = std::getenv("CAKE_OUT_DIR"); dir && *dir) {
      path = (std::filesystem::path(dir) / (name + ".json")).string();
    }
  }
  if (!path.empty()) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << doc.dump(2) << '\n';
  }
  if (cfg.json) out << doc.dump(2) << '\n';
}

Profile load_profile(const std::string& spec, std::size_t agents, std::uint64_t seed) {
  if (spec == "uniform") return Profile(agents, KitchenMeasure::uniform());
  if (spec == "random") {
    std::mt19937_64 rng(seed);
    return random_profile(agents, rng);
  }
  Json j = read_json(spec);
  Profile p = j.get<Profile>();
  if (p.size() != agents) throw ConfigError("profile has " + std::to_string(p.size()) + " measures for " +
                                            std::to_string(agents) + " agents");
  return p;
}

GameSetup setup_from(const RunConfig& cfg, GameMode mode, const Entitlements& e, std::uint64_t seed) {
  GameSetup s;
  s.mode = mode;
  s.entitlements = e;
  s.mediator = MediatorSpec{cfg.mediator, seed, cfg.stop_after};
  s.budget = cfg.unbounded ? -1 : cfg.budget;
  s.permissive = cfg.permissive;
  s.checked = cfg.checked;
  if (mode == GameMode::adversary) {
    s.adversary = AdversarySetup{cfg.adversary, cfg.c_star, parse_schedule_mode(cfg.schedule)};
    if (cfg.adversary != "sigma" && cfg.adversary != "nature") {
      throw ConfigError("unknown adversary '" + cfg.adversary + "' (expected sigma or nature)");
    }
  }
  if (mode == GameMode::division || cfg.adversary == "nature") s.profile = load_profile(cfg.profile, e.size(), seed);
  return s;
}

Transcript play(const GameSetup& s) {
  auto mediator = make_mediator(s.mediator, s.entitlements);
  GameOptions opts;
  opts.budget = s.budget;
  opts.permissive = s.permissive;
  if (s.mode == GameMode::division) {
    if (!s.profile) throw ConfigError("a division game needs a measure profile");
    return run_division_game(*mediator, s.entitlements, *s.profile, opts);
  }
  if (!s.adversary) throw ConfigError("an adversary game needs an adversary");
  if (s.adversary->kind == "nature") {
    if (!s.profile) throw ConfigError("the nature adversary needs a measure profile");
    NatureAdversary nature(*s.profile);
    return run_adversary_game(*mediator, nature, s.entitlements, opts);
  }
  AdversaryOptions aopts;
  aopts.checked = s.checked;
  SigmaAdversary sigma(s.entitlements, s.adversary->schedule, s.adversary->c_star, aopts);
  return run_adversary_game(*mediator, sigma, s.entitlements, opts);
}

void print_transcript(std::ostream& out, const GameSetup& s, const Transcript& t) {
  out << "mode: " << to_string(t.mode) << "  mediator: " << s.mediator.name << " (seed " << s.mediator.seed << ")";
  if (s.adversary) {
    out << "  adversary: " << s.adversary->kind;
    if (s.adversary->kind == "sigma") out << " c*=" << s.adversary->c_star << " " << to_string(s.adversary->schedule);
  }
  out << '\n';
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const auto& st = t.steps[k];
    out << "step " << k + 1 << ": agent " << st.query.cutter << " cuts " << text(st.query.serving) << " at "
        << st.query.proportion << " -> " << text(response_piece(st.response)) << '\n';
  }
  if (t.final) {
    out << "final:";
    for (std::size_t i = 0; i < t.final->pieces.size(); ++i) out << " agent " << i << " " << text(t.final->pieces[i]) << ";";
    out << '\n';
  } else {
    out << "final: unterminated\n";
  }
  out << "cost: " << t.cost << "  verdict: " << to_string(t.verdict) << "  payoff: " << payoff_text(t) << '\n';
  if (!t.detail.empty()) out << "detail: " << t.detail << '\n';
}

int play_games(const RunConfig& cfg, GameMode mode, std::ostream& out) {
  Entitlements e = parse_entitlements(cfg.entitlements, cfg.radicand);
  if (cfg.sweep < 1) throw ConfigError("--sweep must be at least 1");
  const char* name = mode == GameMode::division ? "simulate" : "duel";
  auto forced = [&](const Transcript& t) {
    auto p = payoff(t);
    return !p || *p < -cfg.c_star;
  };

  if (cfg.sweep == 1) {
    GameSetup s = setup_from(cfg, mode, e, cfg.seed);
    Transcript t = play(s);
    if (!cfg.json) {
      print_transcript(out, s, t);
      if (mode == GameMode::adversary && s.adversary->kind == "sigma") {
        out << "forced: " << (forced(t) ? "yes" : "no") << " (payoff " << (forced(t) ? "<" : ">=") << " -"
            << cfg.c_star << ")\n";
      }
    }
    emit(cfg, to_json_document({s, t}), name, out);
    return exit_code(t.verdict);
  }

  // Independent seeds run concurrently; results are reported in seed order.
  std::vector<std::future<std::pair<GameSetup, Transcript>>> jobs;
  unsigned lanes = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::pair<GameSetup, Transcript>> results;
  for (long k = 0; k < cfg.sweep; ++k) {
    GameSetup s = setup_from(cfg, mode, e, cfg.seed + static_cast<std::uint64_t>(k));
    jobs.push_back(std::async(std::launch::async, [s]() { return std::make_pair(s, play(s)); }));
    if (jobs.size() >= lanes || k + 1 == cfg.sweep) {
      for (auto& j : jobs) results.push_back(j.get());
      jobs.clear();
    }
  }
  std::vector<std::vector<std::string>> rows{{"seed", "cost", "verdict", "payoff"}};
  Json runs = Json::array();
  int code = 0;
  long forced_runs = 0;
  for (const auto& [s, t] : results) {
    rows.push_back({std::to_string(s.mediator.seed), std::to_string(t.cost), to_string(t.verdict), payoff_text(t)});
    Json r{{"seed", s.mediator.seed}, {"cost", t.cost}, {"verdict", to_string(t.verdict)}};
    auto p = payoff(t);
    r["payoff"] = p ? Json(*p) : Json("-inf");
    runs.push_back(r);
    code = std::max(code, exit_code(t.verdict));
    if (forced(t)) ++forced_runs;
  }
  if (!cfg.json) {
    print_table(out, rows);
    if (mode == GameMode::adversary) out << "forced: " << forced_runs << "/" << results.size() << " runs\n";
  }
  emit(cfg, Json{{"mediator", cfg.mediator}, {"entitlements", e}, {"runs", runs}}, name, out);
  return code;
}

int cmd_indices(const RunConfig& cfg, std::ostream& out) {
  Entitlements e = parse_entitlements(cfg.entitlements, cfg.radicand);
  IndexReport r = compute_indices(e);
  std::vector<std::vector<std::string>> rows{{"agent", "entitlement", "precision", "fineness"}};
  Json agents = Json::array();
  for (std::size_t i = 0; i < e.size(); ++i) {
    std::string p = precision(e[i]).str();
    std::string f = fineness(e[i]).get_str();
    rows.push_back({std::to_string(i), e[i].str(), p, f});
    agents.push_back(Json{{"entitlement", e[i]}, {"precision", p}, {"fineness", f}});
  }
  if (!cfg.json) {
    print_table(out, rows);
    out << "clonage " << r.clonage.str() << "  precision " << r.precision.str() << "  fineness "
        << r.fineness.get_str() << '\n';
  }
  emit(cfg,
       Json{{"entitlements", e},
            {"agents", agents},
            {"clonage", r.clonage.str()},
            {"precision", r.precision.str()},
            {"fineness", r.fineness.get_str()}},
       "indices", out);
  return 0;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  Entitlements e = parse_entitlements(cfg.entitlements, cfg.radicand);
  IndexReport r = compute_indices(e);
  const int n = static_cast<int>(e.size());
  std::vector<std::vector<std::string>> rows{{"bound", "value", "from"}};
  Json j{{"entitlements", e}, {"agents", n}};
  auto add = [&](const std::string& name, const std::string& value, const std::string& from) {
    rows.push_back({name, value, from});
    j[name] = value;
  };
  add("prop1-lower", r.precision.is_infinite() ? "inf" : std::to_string(prop1_bound(r.precision.value())),
      "precision " + r.precision.str());
  add("theorem1-lower", r.clonage.is_infinite() ? "inf" : std::to_string(theorem1_bound(r.clonage.value(), n)),
      "clonage " + r.clonage.str());
  add("cloned-ds-cost",
      r.clonage.is_infinite() ? "inf" : mpz_class((r.clonage.value() * r.clonage.value() + r.clonage.value()) / 2).get_str(),
      "clonage " + r.clonage.str());
  add("cf-upper", r.clonage.is_infinite() ? "inf" : cf_upper_bound(r.clonage.value(), n).get_str(),
      "clonage " + r.clonage.str());
  Cf2Lower low = cf2_lower_bound(r.fineness, n);
  std::ostringstream approx;
  approx << std::fixed << std::setprecision(3) << low.approx;
  add("cf2-lower", approx.str(), std::to_string(low.factor) + " log3 " + low.fineness.get_str());
  if (!cfg.json) print_table(out, rows);
  emit(cfg, j, "bounds", out);
  return 0;
}

int cmd_deficiency(const RunConfig& cfg, std::ostream& out) {
  Json j = read_json(cfg.input);
  PartitionRecord p = (j.contains("record") ? j.at("record") : j).get<PartitionRecord>();
  require_valid(p);
  Entitlements e = parse_entitlements(cfg.entitlements, cfg.radicand);
  if (e.size() != p.agents()) throw ConfigError("record and entitlements disagree on agent count");
  Scalar e1 = e[0];
  if (p.agents() > 2) {
    MergePlan plan = merge_extend(e);
    p = to_roles(p, plan);
    e1 = plan.e1;
  }
  long level = cfg.level;
  if (level < 0) level = adversary_schedule(parse_schedule_mode(cfg.schedule), cfg.c_star).front().get_si();
  DeficiencyVerdict v = is_deficient(p, e1, level);
  Json doc{{"level", level}, {"e1", e1}, {"cells", p.size()}, {"deficient", v.deficient}};
  if (v.counterexample) {
    doc["counterexample"] = Json{{"replicas", v.counterexample->replicas}, {"weights", v.counterexample->weights}};
  }
  if (!cfg.json) {
    out << "level " << level << "  cells " << p.size() << "  deficient: " << (v.deficient ? "yes" : "no") << '\n';
    if (v.counterexample) {
      out << "hyperallocation: r=" << v.counterexample->replicas << " w=";
      for (std::size_t k = 0; k < v.counterexample->weights.size(); ++k) out << (k ? "," : "") << v.counterexample->weights[k];
      out << '\n';
    }
  }
  emit(cfg, doc, "deficiency", out);
  return v.deficient ? 0 : 1;
}

// First inconsistency along a transcript's chain of records, or empty.
std::string chain_problem(const TranscriptDocument& doc) {
  const Transcript& t = doc.transcript;
  const std::size_t n = t.entitlements.size();
  if (t.cost != static_cast<long>(t.steps.size())) return "cost does not match the number of steps";
  PartitionRecord running = PartitionRecord::whole(n);
  for (std::size_t k = 0; k < t.steps.size(); ++k) {
    const auto& st = t.steps[k];
    std::string at = "step " + std::to_string(k + 1) + ": ";
    UltraVerdict v = validate_ultraresponse(running, st.query, st.record);
    if (!v) return at + to_string(v.kind) + ": " + v.detail;
    if (!(visible_record(st.record, st.query) == st.response)) return at + "response is not the visible part of the record";
    running = st.record;
  }
  if (t.final) {
    std::string why = allocation_problem(*t.final, n);
    if (!why.empty()) return "final allocation: " + why;
  }
  return {};
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  Json j = read_json(cfg.input);
  std::string verdict;
  std::string detail;
  if (j.contains("schema")) {
    TranscriptDocument doc = from_json_document(j);
    detail = chain_problem(doc);
    verdict = detail.empty() ? "accept" : "malformed";
  } else {
    PartitionRecord p = j.at("record").get<PartitionRecord>();
    Query q = j.at("query").get<Query>();
    PartitionRecord r = j.at("response").get<PartitionRecord>();
    UltraVerdict v = validate_ultraresponse(p, q, r);
    verdict = to_string(v.kind);
    detail = v.detail;
  }
  if (!cfg.json) {
    out << "verdict: " << verdict << '\n';
    if (!detail.empty()) out << "detail: " << detail << '\n';
  }
  emit(cfg, Json{{"verdict", verdict}, {"detail", detail}}, "validate", out);
  return verdict == "accept" ? 0 : 1;
}

int cmd_replay(const RunConfig& cfg, std::ostream& out) {
  Json original = read_json(cfg.input);
  TranscriptDocument doc = from_json_document(original);
  Transcript again = play(doc.setup);
  Json rerun = to_json_document({doc.setup, again});
  bool same = rerun == original;
  if (!cfg.json) {
    print_transcript(out, doc.setup, again);
    out << "replay: " << (same ? "identical" : "differs") << '\n';
  }
  emit(cfg, rerun, "replay", out);
  return same ? exit_code(again.verdict) : 2;
}

}  // namespace

Entitlements parse_entitlements(const std::string& text, std::uint64_t radicand) {
  if (radicand != 0 && !is_squarefree(radicand)) {
    throw ConfigError("radicand " + std::to_string(radicand) + " is not a squarefree integer >= 2");
  }
  if (text == "golden") {
    if (radicand != 5) throw ConfigError("the golden profile lives in Q(sqrt 5); use --radicand 5");
    Scalar g = Scalar::golden();
    return {g, Scalar(1) - g};
  }
  Entitlements e;
  std::stringstream ss(text);
  std::string token;
  std::vector<std::string> tokens;
  while (std::getline(ss, token, ',')) tokens.push_back(token);
  if (tokens.empty()) throw ParseError("no entitlements given");
  Scalar sum;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (tokens[k] == "rest") {
      if (k + 1 != tokens.size()) throw ParseError("'rest' must be the last entitlement");
      e.push_back(Scalar(1) - sum);
    } else {
      e.push_back(Scalar::parse(tokens[k]));
    }
    if (e.back().radicand() != 0 && e.back().radicand() != radicand) {
      throw ConfigError("entitlement '" + tokens[k] + "' uses sqrt " + std::to_string(e.back().radicand()) +
                        " but --radicand is " + std::to_string(radicand));
    }
    sum += e.back();
  }
  check_entitlements(e);
  return e;
}

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const std::string& c = cfg.subcommand;
    if (c == "indices") return cmd_indices(cfg, out);
    if (c == "bounds") return cmd_bounds(cfg, out);
    if (c == "simulate") return play_games(cfg, GameMode::division, out);
    if (c == "duel") return play_games(cfg, GameMode::adversary, out);
    if (c == "deficiency") return cmd_deficiency(cfg, out);
    if (c == "validate") return cmd_validate(cfg, out);
    if (c == "replay") return cmd_replay(cfg, out);
    err << "error: unknown subcommand '" << c << "'\n";
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << " (try --schedule minimal or a smaller --cstar)\n";
  } catch (const Json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 2;
}

}  // namespace cake
