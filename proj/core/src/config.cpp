// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/config.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "hintstep/error.hpp"
#include "hintstep/openai_backend.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace hintstep {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void expand_strings(json& j) {
  if (j.is_string()) {
    j = expand_env(j.get<std::string>());
  } else if (j.is_structured()) {
    for (auto& child : j) expand_strings(child);
  }
}

json parse_override_value(const std::string& raw) {
  json v = json::parse(raw, nullptr, false);
  if (v.is_discarded()) return raw;
  return v;
}

void apply_override(json& root, const ConfigOverride& o) {
  if (o.first.empty()) throw ConfigError("empty override key");
  json* node = &root;
  std::string_view key = o.first;
  while (true) {
    std::size_t dot = key.find('.');
    std::string part(key.substr(0, dot));
    if (part.empty()) throw ConfigError("malformed override key '" + o.first + "'");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override '" + o.first + "' descends into a non-object");
      *node = json::object();
    }
    node = &(*node)[part];
    if (dot == std::string_view::npos) break;
    key = key.substr(dot + 1);
  }
  *node = parse_override_value(o.second);
}

// Typed access with "section.key" in every message.
class Section {
 public:
  Section(json j, std::string name, std::initializer_list<const char*> allowed)
      : j_(std::move(j)), name_(std::move(name)) {
    if (j_.is_null()) return;
    if (!j_.is_object()) throw ConfigError("'" + name_ + "' must be an object");
    std::set<std::string_view> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j_.items()) {
      if (ok.count(k) == 0) throw ConfigError("unknown config key '" + where(k.c_str()) + "'");
    }
  }

  const json* get(const char* key) const {
    if (!j_.is_object()) return nullptr;
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return nullptr;
    return &*it;
  }
  std::optional<std::string> str(const char* key) const {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError("'" + where(key) + "' must be a string");
    return v->get<std::string>();
  }
  template <class T>
  std::optional<T> num(const char* key) const {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if constexpr (std::is_integral_v<T>) {
      if (!v->is_number_integer()) throw ConfigError("'" + where(key) + "' must be an integer");
    } else {
      if (!v->is_number()) throw ConfigError("'" + where(key) + "' must be a number");
    }
    return v->get<T>();
  }
  std::optional<bool> flag(const char* key) const {
    const json* v = get(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) throw ConfigError("'" + where(key) + "' must be true or false");
    return v->get<bool>();
  }
  std::string where(const char* key) const { return name_ + "." + key; }
  const json& raw() const { return j_; }

 private:
  json j_;
  std::string name_;
};

template <class E>
E enum_value(const std::string& s, const std::string& where) {
  if (auto v = enum_from_string<E>(s)) return *v;
  throw ConfigError("invalid value '" + s + "' for '" + where + "'");
}

DecodingParams parse_decoding(const json& j, const std::string& where, DecodingParams d) {
  Section s(j, where, {"temperature", "top_p", "max_new_tokens", "seed", "response_format"});
  if (auto v = s.num<double>("temperature")) d.temperature = *v;
  if (auto v = s.num<double>("top_p")) d.top_p = *v;
  if (auto v = s.num<int>("max_new_tokens")) d.max_new_tokens = *v;
  if (auto v = s.num<std::int64_t>("seed")) d.seed = *v;
  if (auto v = s.str("response_format")) {
    if (*v == "free_text") d.response_format = ResponseFormat::kFreeText;
    else if (*v == "constrained_json") d.response_format = ResponseFormat::kConstrainedJson;
    else throw ConfigError("invalid value '" + *v + "' for '" + where + ".response_format'");
  }
  return d;
}

struct PathResolver {
  fs::path config_base;
  std::set<std::string> from_cli;  // dotted keys set by overrides

  fs::path operator()(const std::string& key, const std::string& value) const {
    fs::path p(value);
    if (p.is_absolute()) return p;
    // Overrides come from the command line and are relative to the cwd.
    bool cli = from_cli.count(key) != 0;
    return cli ? p : config_base / p;
  }
};

BackendSpec parse_backend(const json& j, const std::string& where, const PathResolver& resolve) {
  Section s(j, where,
            {"type", "base_url", "model", "api_key_env", "timeout_s", "max_retries",
             "max_concurrency", "backoff_s", "decoding", "mock"});
  BackendSpec spec;
  std::string type = s.str("type").value_or("openai");
  if (type == "openai") {
    spec.type = BackendSpec::Type::kOpenAi;
  } else if (type == "mock") {
    spec.type = BackendSpec::Type::kMock;
  } else {
    throw ConfigError("'" + where + ".type' must be openai or mock");
  }
  EndpointConfig& e = spec.endpoint;
  e.base_url = s.str("base_url").value_or("");
  e.model_name = s.str("model").value_or(spec.type == BackendSpec::Type::kMock ? "mock" : "");
  e.api_key_env = s.str("api_key_env").value_or("");
  if (auto v = s.num<double>("timeout_s")) e.timeout_s = *v;
  if (auto v = s.num<int>("max_retries")) e.max_retries = *v;
  if (auto v = s.num<int>("max_concurrency")) e.max_concurrency = *v;
  if (auto v = s.num<double>("backoff_s")) e.backoff_initial_s = *v;
  if (const json* d = s.get("decoding")) e.decoding = parse_decoding(*d, where + ".decoding", e.decoding);

  if (spec.type == BackendSpec::Type::kMock) {
    const json* m = s.get("mock");
    if (!m) throw ConfigError("'" + where + ".mock.script' is required for mock backends");
    Section ms(*m, where + ".mock", {"script", "mode"});
    auto script = ms.str("script");
    if (!script) throw ConfigError("'" + where + ".mock.script' is required for mock backends");
    spec.mock_script = resolve(where + ".mock.script", *script);
    std::string mode = ms.str("mode").value_or("ordered");
    if (mode == "ordered") spec.mock_mode = MockMode::kOrdered;
    else if (mode == "rules") spec.mock_mode = MockMode::kRules;
    else throw ConfigError("'" + where + ".mock.mode' must be ordered or rules");
  } else {
    e.validate();
  }
  return spec;
}

RunConfig build(const json& root, const PathResolver& resolve) {
  Section top(root, "config", {"paths", "backends", "solve", "hints", "report", "templates"});
  RunConfig c;

  Section paths(top.get("paths") ? *top.get("paths") : json(),
                "paths",
                {"out", "problems", "hints", "training", "training_prompts", "runs",
                 "transcripts", "verdicts", "overrides", "report_dir"});
  if (auto v = paths.str("out")) c.out_dir = resolve("paths.out", *v);
  auto path_or = [&](const char* key, const char* fallback) {
    if (auto v = paths.str(key)) return resolve(std::string("paths.") + key, *v);
    return fallback ? c.out_dir / fallback : fs::path();
  };
  c.problems = path_or("problems", nullptr);
  c.hints = path_or("hints", "hints.jsonl");
  c.training = path_or("training", "training.jsonl");
  c.training_prompts = path_or("training_prompts", "training_prompts.jsonl");
  c.runs = path_or("runs", "runs.jsonl");
  c.transcripts = path_or("transcripts", "transcripts.jsonl");
  c.verdicts = path_or("verdicts", "verdicts.jsonl");
  if (auto v = paths.str("overrides")) c.overrides = resolve("paths.overrides", *v);
  c.report_dir = paths.str("report_dir") ? resolve("paths.report_dir", *paths.str("report_dir"))
                                         : c.out_dir;

  Section backends(top.get("backends") ? *top.get("backends") : json(), "backends",
                   {"hinter", "step_hinter", "solver", "judge"});
  auto backend = [&](const char* key) -> std::optional<BackendSpec> {
    if (const json* b = backends.get(key)) return parse_backend(*b, std::string("backends.") + key, resolve);
    return std::nullopt;
  };
  c.hinter = backend("hinter");
  c.step_hinter = backend("step_hinter");
  c.solver = backend("solver");
  c.judge = backend("judge");

  Section solve(top.get("solve") ? *top.get("solve") : json(), "solve",
                {"mode", "hint_source", "k", "runs", "seed", "include_problem_every_step",
                 "max_hints"});
  if (auto v = solve.str("mode")) {
    auto m = parse_mode_flag(*v);
    if (!m) throw ConfigError("invalid value '" + *v + "' for 'solve.mode' (no_hint, hinted, sc)");
    c.mode = *m;
  }
  if (auto v = solve.str("hint_source")) c.hint_source = enum_value<HintSource>(*v, "solve.hint_source");
  if (auto v = solve.num<int>("k")) c.k = *v;
  if (auto v = solve.num<int>("runs")) c.runs_count = *v;
  if (auto v = solve.num<std::int64_t>("seed")) c.seed = *v;
  if (auto v = solve.flag("include_problem_every_step")) c.include_problem_every_step = *v;

  Section hints(top.get("hints") ? *top.get("hints") : json(), "hints",
                {"max_hints", "include_prior_hints"});
  if (auto v = hints.num<int>("max_hints")) c.max_hints = *v;
  if (auto v = solve.num<int>("max_hints")) c.max_hints = *v;
  if (auto v = hints.flag("include_prior_hints")) c.include_prior_hints = *v;

  Section report(top.get("report") ? *top.get("report") : json(), "report", {"drop_pending"});
  if (auto v = report.flag("drop_pending")) c.drop_pending = *v;

  if (const json* t = top.get("templates")) {
    if (!t->is_object()) throw ConfigError("'templates' must map template keys to files");
    for (const auto& [key, value] : t->items()) {
      if (!value.is_string()) throw ConfigError("'templates." + key + "' must be a path");
      c.templates[key] = resolve("templates." + key, value.get<std::string>());
    }
  }
  c.validate();
  return c;
}

RunConfig from_json(json root, const fs::path& base_dir,
                    const std::vector<ConfigOverride>& overrides) {
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  PathResolver resolve{base_dir, {}};
  for (const ConfigOverride& o : overrides) {
    apply_override(root, o);
    resolve.from_cli.insert(o.first);
  }
  expand_strings(root);
  return build(root, resolve);
}

}  // namespace

void RunConfig::validate() const {
  if (k < 1) throw ConfigError("solve.k must be >= 1");
  if (runs_count < 1) throw ConfigError("solve.runs must be >= 1");
  if (max_hints < 1) throw ConfigError("max_hints must be >= 1");
}

std::string expand_env(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '$' || i + 1 >= text.size()) {
      out += text[i];
      continue;
    }
    if (text[i + 1] == '$') {
      out += '$';
      ++i;
      continue;
    }
    if (text[i + 1] != '{') {
      out += text[i];
      continue;
    }
    std::size_t close = text.find('}', i + 2);
    if (close == std::string_view::npos) throw ConfigError("unterminated ${ in config value");
    std::string name(text.substr(i + 2, close - i - 2));
    const char* value = std::getenv(name.c_str());
    if (value == nullptr) throw ConfigError("environment variable " + name + " is not set");
    out += value;
    i = close;
  }
  return out;
}

RunConfig parse_config(std::string_view text, const fs::path& base_dir,
                       const std::vector<ConfigOverride>& overrides) {
  json root = json::parse(text, nullptr, false, /*ignore_comments=*/true);
  if (root.is_discarded()) throw ConfigError("config is not valid JSON");
  return from_json(std::move(root), base_dir, overrides);
}

RunConfig load_config(const fs::path& path, const std::vector<ConfigOverride>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), path.parent_path(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

RunConfig default_config(const std::vector<ConfigOverride>& overrides) {
  return from_json(json::object(), fs::path(), overrides);
}

std::vector<ConfigOverride> extract_dotted_overrides(std::vector<std::string>& args) {
  std::vector<ConfigOverride> out;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0 || a == "--") {
      rest.push_back(a);
      continue;
    }
    std::size_t eq = a.find('=');
    std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
    if (key.find('.') == std::string::npos) {
      rest.push_back(a);
      continue;
    }
    if (eq != std::string::npos) {
      out.emplace_back(key, a.substr(eq + 1));
    } else if (i + 1 < args.size()) {
      out.emplace_back(key, args[++i]);
    } else {
      throw ConfigError("override --" + key + " needs a value");
    }
  }
  args = std::move(rest);
  return out;
}

std::unique_ptr<Backend> make_backend(const BackendSpec& spec) {
  if (spec.type == BackendSpec::Type::kOpenAi) return std::make_unique<OpenAiBackend>(spec.endpoint);
  auto mock = std::make_unique<MockBackend>(load_mock_script(spec.mock_script), spec.mock_mode,
                                            spec.endpoint.model_name);
  mock->set_default_decoding(spec.endpoint.decoding);
  return mock;
}

PromptSet load_prompts(const RunConfig& config) {
  PromptSet prompts = PromptSet::defaults();
  for (const auto& [key, path] : config.templates) prompts.set(key, PromptTemplate::load(path));
  prompts.validate();
  return prompts;
}

std::string format_utc(std::int64_t unix_seconds) {
  std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string artifact_timestamp(const Backend& backend) {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    try {
      return format_utc(std::stoll(epoch));
    } catch (const std::exception&) {
      throw ConfigError("SOURCE_DATE_EPOCH is not an integer");
    }
  }
  if (backend.scripted()) return format_utc(0);
  auto now = std::chrono::system_clock::now();
  return format_utc(std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
}

}  // namespace hintstep
