#include "qmdp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <tuple>

#include <unistd.h>

#include "json.hpp"
#include "qmdp/errors.hpp"

namespace qmdp {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string(where) + ": missing field '" + key + "'");
  }
  return j.at(key);
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw ConfigError(std::string(what) + " must be an integer");
  return j.get<int>();
}

double as_number(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  return j.get<double>();
}

WealthSpace space_from_json(const json& j) {
  const std::string kind = field(j, "kind", "wealth_space").get<std::string>();
  if (kind == "additive") return WealthSpace::additive();
  if (kind == "discounted") {
    return WealthSpace::discounted(as_number(field(j, "gamma", "wealth_space"), "gamma"));
  }
  if (kind != "ordinal") throw ConfigError("unknown wealth space kind '" + kind + "'");

  const auto classes = field(j, "classes", "wealth_space").get<std::vector<std::string>>();
  const json& table_json = field(j, "transition_table", "wealth_space");
  if (!table_json.is_object()) throw ConfigError("transition_table must be an object");
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    labels = j.at("labels").get<std::vector<std::string>>();
  } else {
    std::set<std::string> seen;
    for (const auto& [cls, row] : table_json.items()) {
      for (const auto& [label, next] : row.items()) seen.insert(label);
    }
    labels.assign(seen.begin(), seen.end());
  }

  auto index_of = [](const std::vector<std::string>& names, const std::string& name,
                     const char* what) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == name) return static_cast<int>(i);
    }
    throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
  };

  std::vector<std::vector<int>> table(classes.size(), std::vector<int>(labels.size(), -1));
  for (const auto& [cls, row] : table_json.items()) {
    const int c = index_of(classes, cls, "wealth class");
    for (const auto& [label, next] : row.items()) {
      table[c][index_of(labels, label, "reward label")] =
          index_of(classes, next.get<std::string>(), "wealth class");
    }
  }
  for (std::size_t c = 0; c < table.size(); ++c) {
    for (std::size_t l = 0; l < labels.size(); ++l) {
      if (table[c][l] < 0) {
        throw ConfigError("transition_table lacks (" + classes[c] + ", " + labels[l] + ")");
      }
    }
  }
  int initial = 0;
  if (j.contains("w0")) initial = index_of(classes, j.at("w0").get<std::string>(), "wealth class");
  return WealthSpace::ordinal(classes, labels, std::move(table), initial);
}

json space_to_json(const WealthSpace& space) {
  switch (space.kind()) {
    case WealthKind::Additive:
      return {{"kind", "additive"}};
    case WealthKind::Discounted:
      return {{"kind", "discounted"}, {"gamma", space.gamma()}};
    case WealthKind::Ordinal:
      break;
  }
  const auto& classes = space.classes();
  const auto& labels = space.labels();
  json table = json::object();
  for (std::size_t c = 0; c < classes.size(); ++c) {
    json row = json::object();
    for (std::size_t l = 0; l < labels.size(); ++l) {
      row[labels[l]] = classes[space.transition_table()[c][l]];
    }
    table[classes[c]] = std::move(row);
  }
  return {{"kind", "ordinal"},
          {"classes", classes},
          {"labels", labels},
          {"transition_table", std::move(table)},
          {"w0", classes[space.class_index(space.w0())]}};
}

Reward reward_from_json(const json& j, const WealthSpace& space) {
  if (j.is_string()) {
    if (space.kind() != WealthKind::Ordinal) {
      throw ConfigError("reward labels by name need an ordinal wealth space");
    }
    return static_cast<Reward>(space.label_of(j.get<std::string>()));
  }
  return as_number(j, "reward");
}

json reward_to_json(Reward r, const WealthSpace& space) {
  if (space.kind() == WealthKind::Ordinal) {
    const auto label = static_cast<std::size_t>(r);
    if (static_cast<Reward>(label) == r && label < space.labels().size()) {
      return space.labels()[label];
    }
  }
  return r;
}

}  // namespace

Problem problem_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("problem file is not valid JSON: ") + e.what());
  }
  try {
    Problem p;
    p.space = space_from_json(field(root, "wealth_space", "problem"));
    const json& mj = field(root, "mdp", "problem");
    const int n_states = as_int(field(mj, "n_states", "mdp"), "n_states");
    const int n_actions = as_int(field(mj, "n_actions", "mdp"), "n_actions");
    const json& rewards = field(mj, "rewards", "mdp");
    const std::string reward_kind = field(rewards, "kind", "rewards").get<std::string>();
    if (reward_kind != "sa" && reward_kind != "sas") {
      throw ConfigError("rewards.kind must be 'sa' or 'sas'");
    }
    const RewardKind kind =
        reward_kind == "sa" ? RewardKind::StateAction : RewardKind::StateActionNext;

    std::optional<int> horizon;
    const json& h = field(mj, "horizon", "mdp");
    if (h.is_string()) {
      if (h.get<std::string>() != "inf") throw ConfigError("horizon must be an integer or \"inf\"");
    } else if (!h.is_null()) {
      horizon = as_int(h, "horizon");
      if (*horizon < 0) throw ConfigError("horizon must be nonnegative");
    }
    const int initial = mj.contains("initial_state") ? as_int(mj.at("initial_state"), "initial_state") : 0;
    if (initial < 0 || initial >= n_states) throw ConfigError("initial_state out of range");
    p.mdp = Mdp(n_states, n_actions, kind, initial, horizon);

    const json& values = field(rewards, "values", "rewards");
    std::map<std::tuple<int, int, int>, Reward> sas;
    if (kind == RewardKind::StateActionNext) {
      for (const auto& e : values) {
        if (!e.is_array() || e.size() != 4) throw ConfigError("sas rewards are [s, a, s', r]");
        sas[{as_int(e[0], "s"), as_int(e[1], "a"), as_int(e[2], "s'")}] =
            reward_from_json(e[3], p.space);
      }
    }
    for (const auto& e : field(mj, "transitions", "mdp")) {
      if (!e.is_array() || e.size() != 4) throw ConfigError("transitions are [s, a, s', p]");
      const int s = as_int(e[0], "s");
      const int a = as_int(e[1], "a");
      const int next = as_int(e[2], "s'");
      Reward r = 0.0;
      if (kind == RewardKind::StateActionNext) {
        const auto it = sas.find({s, a, next});
        if (it != sas.end()) r = it->second;
      }
      p.mdp.add_transition(s, a, next, as_number(e[3], "p"), r);
    }
    if (kind == RewardKind::StateAction) {
      if (!values.is_array() || static_cast<int>(values.size()) != n_states) {
        throw ConfigError("sa rewards need one row per state");
      }
      for (int s = 0; s < n_states; ++s) {
        if (!values[s].is_array() || static_cast<int>(values[s].size()) != n_actions) {
          throw ConfigError("sa rewards need one entry per action");
        }
        for (int a = 0; a < n_actions; ++a) {
          p.mdp.set_reward(s, a, reward_from_json(values[s][a], p.space));
        }
      }
    }
    p.mdp.finalize();
    if (const auto violations = validate(p.mdp); !violations.empty()) {
      throw ConfigError("invalid model: " + violations.front().message);
    }
    if (p.space.kind() == WealthKind::Ordinal) {
      for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < n_actions; ++a) {
          for (const auto& e : p.mdp.row(s, a)) p.space.accumulate(p.space.w0(), e.reward, 0);
        }
      }
    }
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed problem file: ") + e.what());
  }
}

std::string problem_to_json(const Problem& problem) {
  const Mdp& m = problem.mdp;
  json transitions = json::array();
  json values = json::array();
  for (int s = 0; s < m.n_states(); ++s) {
    json row = json::array();
    for (int a = 0; a < m.n_actions(); ++a) {
      for (const auto& e : m.row(s, a)) {
        transitions.push_back({s, a, e.next, e.probability});
        if (m.reward_kind() == RewardKind::StateActionNext) {
          values.push_back({s, a, e.next, reward_to_json(e.reward, problem.space)});
        }
      }
      row.push_back(reward_to_json(m.reward(s, a), problem.space));
    }
    if (m.reward_kind() == RewardKind::StateAction) values.push_back(std::move(row));
  }
  json mj = {{"n_states", m.n_states()},
             {"n_actions", m.n_actions()},
             {"transitions", std::move(transitions)},
             {"rewards",
              {{"kind", m.reward_kind() == RewardKind::StateAction ? "sa" : "sas"},
               {"values", std::move(values)}}},
             {"initial_state", m.initial_state()}};
  if (m.horizon()) {
    mj["horizon"] = *m.horizon();
  } else {
    mj["horizon"] = "inf";
  }
  json root = {{"mdp", std::move(mj)}, {"wealth_space", space_to_json(problem.space)}};
  return root.dump(1) + "\n";
}

Problem load_problem(const std::filesystem::path& path) {
  return problem_from_json(read_file(path));
}

void save_problem(const std::filesystem::path& path, const Problem& problem) {
  write_file_atomic(path, problem_to_json(problem));
}

std::string policy_to_json(const WealthMarkovPolicy& pi) {
  json out = json::array();
  const auto& rules = pi.rules();
  for (std::size_t t = 0; t < rules.size(); ++t) {
    for (std::size_t s = 0; s < rules[t].size(); ++s) {
      const DecisionRule& rule = rules[t][s];
      json intervals = json::array();
      intervals.push_back({{"from", nullptr}, {"inclusive_from", true}, {"action", rule.base_action()}});
      for (const auto& iv : rule.intervals()) {
        intervals.push_back(
            {{"from", iv.from}, {"inclusive_from", iv.inclusive_from}, {"action", iv.action}});
      }
      json entry = json::object();
      if (!pi.stationary()) entry["t"] = t;
      entry["s"] = s;
      entry["intervals"] = std::move(intervals);
      out.push_back(std::move(entry));
    }
  }
  return out.dump(1) + "\n";
}

WealthMarkovPolicy policy_from_json(const std::string& text, int n_states) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("policy file is not valid JSON: ") + e.what());
  }
  if (!root.is_array() || root.empty()) throw ConfigError("policy file must be a nonempty list");
  try {
    const bool stationary = !root.front().contains("t");
    int layers = 1;
    for (const auto& e : root) {
      if (e.contains("t") == stationary) {
        throw ConfigError("policy entries must all have, or all omit, 't'");
      }
      if (!stationary) layers = std::max(layers, as_int(e.at("t"), "t") + 1);
    }
    std::vector<std::vector<DecisionRule>> rules(
        static_cast<std::size_t>(layers), std::vector<DecisionRule>(static_cast<std::size_t>(n_states)));
    std::vector<std::vector<char>> seen(static_cast<std::size_t>(layers),
                                        std::vector<char>(static_cast<std::size_t>(n_states), 0));
    for (const auto& e : root) {
      const int t = stationary ? 0 : as_int(e.at("t"), "t");
      const int s = as_int(field(e, "s", "policy entry"), "s");
      if (t < 0 || s < 0 || s >= n_states) {
        throw ConfigError("policy entry (t=" + std::to_string(t) + ", s=" + std::to_string(s) +
                          ") does not match the model");
      }
      const json& ivs = field(e, "intervals", "policy entry");
      if (!ivs.is_array() || ivs.empty()) throw ConfigError("policy intervals must be nonempty");
      const int base = as_int(field(ivs[0], "action", "interval"), "action");
      std::vector<ActionInterval> intervals;
      for (std::size_t i = 1; i < ivs.size(); ++i) {
        intervals.push_back({as_number(field(ivs[i], "from", "interval"), "from"),
                             field(ivs[i], "inclusive_from", "interval").get<bool>(),
                             as_int(field(ivs[i], "action", "interval"), "action")});
      }
      rules[t][s] = DecisionRule(base, std::move(intervals));
      seen[t][s] = 1;
    }
    for (int t = 0; t < layers; ++t) {
      for (int s = 0; s < n_states; ++s) {
        if (!seen[t][s]) {
          throw ConfigError("policy lacks a rule for (t=" + std::to_string(t) +
                            ", s=" + std::to_string(s) + ")");
        }
      }
    }
    return WealthMarkovPolicy(std::move(rules), stationary);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed policy file: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("malformed policy file: ") + e.what());
  }
}

namespace {

std::string number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string distribution_csv(const WealthDistribution& d) {
  std::ostringstream out;
  out << "wealth,probability,F,G\n";
  const auto atoms = d.atoms();
  std::vector<double> above(atoms.size() + 1, 0.0);
  for (std::size_t i = atoms.size(); i-- > 0;) above[i] = above[i + 1] + atoms[i].probability;
  double below = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    below += atoms[i].probability;
    out << number(atoms[i].wealth) << ',' << number(atoms[i].probability) << ','
        << number(below) << ',' << number(std::min(above[i], 1.0)) << '\n';
  }
  return out.str();
}

std::string search_log_csv(const SolveReport& report) {
  std::ostringstream out;
  out << "iteration,w,p,accepted\n";
  for (std::size_t i = 0; i < report.log.size(); ++i) {
    const auto& step = report.log[i];
    out << i + 1 << ',' << number(step.w) << ',' << number(step.p) << ','
        << (step.accepted ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string value_function_csv(const ValueFunction& vf) {
  std::ostringstream out;
  out << "t,s,threshold,inclusive,value\n";
  for (int t = 0; t < vf.layers(); ++t) {
    for (std::size_t s = 0; s < vf.slices[t].size(); ++s) {
      if (!vf.computed.empty() && !vf.computed[t][s]) continue;
      const StepFunction& f = vf.slices[t][s];
      out << t << ',' << s << ",-inf,0," << number(f.base()) << '\n';
      for (const auto& step : f.steps()) {
        out << t << ',' << s << ',' << number(step.at) << ',' << (step.inclusive ? 1 : 0) << ','
            << number(step.value) << '\n';
      }
    }
  }
  return out.str();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw ConfigError("cannot write " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot replace " + path.string());
  }
}

}  // namespace qmdp
