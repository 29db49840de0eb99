#include "moss/core/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace moss::core {

const char* to_string(EnvSuite s) {
  switch (s) {
    case EnvSuite::point_vel: return "point_vel";
    case EnvSuite::point_vel_ood: return "point_vel_ood";
    case EnvSuite::point_vel_nonstat: return "point_vel_nonstat";
    case EnvSuite::point_multi: return "point_multi";
  }
  return "?";
}

EnvSuite env_suite_from_string(const std::string& s) {
  if (s == "point_vel") return EnvSuite::point_vel;
  if (s == "point_vel_ood") return EnvSuite::point_vel_ood;
  if (s == "point_vel_nonstat") return EnvSuite::point_vel_nonstat;
  if (s == "point_multi") return EnvSuite::point_multi;
  throw ValidationError("env_suite: unknown suite '" + s + "'");
}

int RunConfig::effective_recon_steps() const {
  return std::max(1, static_cast<int>(std::lround(num_training_steps_reconstruction / desk_scale)));
}

int RunConfig::effective_policy_steps() const {
  return std::max(1, static_cast<int>(std::lround(num_training_steps_policy / desk_scale)));
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long long parse_ll(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  long long out;
  try {
    out = std::stoll(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected integer, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError("key '" + key + "': expected integer, got '" + v + "'");
  return out;
}

int parse_int(const std::string& v, const std::string& key) {
  return static_cast<int>(parse_ll(v, key));
}

double parse_double(const std::string& v, const std::string& key) {
  std::size_t pos = 0;
  double out;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected number, got '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError("key '" + key + "': expected number, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "True" || v == "1") return true;
  if (v == "false" || v == "False" || v == "0") return false;
  throw ConfigError("key '" + key + "': expected boolean, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

#define INT_FIELD(name) \
  {#name, [](RunConfig& c, const std::string& k, const std::string& v) { c.name = parse_int(v, k); }}
#define LL_FIELD(name) \
  {#name, [](RunConfig& c, const std::string& k, const std::string& v) { c.name = parse_ll(v, k); }}
#define DBL_FIELD(name) \
  {#name, [](RunConfig& c, const std::string& k, const std::string& v) { c.name = parse_double(v, k); }}
#define BOOL_FIELD(name) \
  {#name, [](RunConfig& c, const std::string& k, const std::string& v) { c.name = parse_bool(v, k); }}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"env_suite",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.env_suite = env_suite_from_string(v);
       }},
      LL_FIELD(seed),
      INT_FIELD(n_train_tasks),
      INT_FIELD(n_eval_tasks),
      INT_FIELD(num_train_epochs),
      INT_FIELD(num_train_tasks_per_episode),
      INT_FIELD(batch_size_reconstruction),
      INT_FIELD(batch_size_policy),
      INT_FIELD(max_path_length),
      INT_FIELD(num_eval_trajectories),
      INT_FIELD(eval_interval),
      DBL_FIELD(desk_scale),
      BOOL_FIELD(use_normalized_env),
      INT_FIELD(replay_capacity),
      INT_FIELD(workers),
      INT_FIELD(sac_layer_size),
      DBL_FIELD(policy_net_lr),
      BOOL_FIELD(automatic_entropy_tuning),
      DBL_FIELD(sac_alpha),
      DBL_FIELD(gamma),
      DBL_FIELD(tau_polyak),
      DBL_FIELD(reward_scale),
      INT_FIELD(latent_size),
      INT_FIELD(num_training_steps_policy),
      INT_FIELD(num_transitions_initial),
      INT_FIELD(num_transitions_per_episode),
      INT_FIELD(time_steps),
      BOOL_FIELD(use_trajectory_sample_sac),
      BOOL_FIELD(retain_hidden),
      BOOL_FIELD(use_reward_normalization),
      BOOL_FIELD(bayes_adaptive),
      BOOL_FIELD(policy_use_cat_probs),
      BOOL_FIELD(policy_dim_preprocess),
      INT_FIELD(state_embed_dim),
      INT_FIELD(latent_embed_dim),
      BOOL_FIELD(clip_grad_policy),
      DBL_FIELD(max_grad_norm_policy),
      DBL_FIELD(lr_encoder),
      DBL_FIELD(lr_decoder),
      INT_FIELD(num_classes),
      DBL_FIELD(alpha),
      DBL_FIELD(beta),
      INT_FIELD(gru_hidden_size),
      INT_FIELD(decoder_hidden_size),
      INT_FIELD(num_training_steps_reconstruction),
      BOOL_FIELD(clip_grad_vae),
      DBL_FIELD(max_grad_norm_vae),
      BOOL_FIELD(use_global_prior),
      BOOL_FIELD(use_contrastive),
      DBL_FIELD(contrastive_weight),
      INT_FIELD(n_queries),
      INT_FIELD(n_keys),
  };
  return table;
}

#undef INT_FIELD
#undef LL_FIELD
#undef DBL_FIELD
#undef BOOL_FIELD

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // keep round-trip exactness but don't print "3.0000000000000000e-05"
  // when a shorter form parses back identically
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[64];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(cfg, key, trim(value));
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key: value'");
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    try {
      apply_override(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  RunConfig cfg = parse_config(buf.str(), path);
  if (const char* env_seed = std::getenv("MOSS_SEED")) {
    cfg.seed = parse_ll(env_seed, "MOSS_SEED");
  }
  return cfg;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "env_suite: " << to_string(c.env_suite) << "\n";
  out << "seed: " << c.seed << "\n";
  out << "n_train_tasks: " << c.n_train_tasks << "\n";
  out << "n_eval_tasks: " << c.n_eval_tasks << "\n";
  out << "num_train_epochs: " << c.num_train_epochs << "\n";
  out << "num_train_tasks_per_episode: " << c.num_train_tasks_per_episode << "\n";
  out << "batch_size_reconstruction: " << c.batch_size_reconstruction << "\n";
  out << "batch_size_policy: " << c.batch_size_policy << "\n";
  out << "max_path_length: " << c.max_path_length << "\n";
  out << "num_eval_trajectories: " << c.num_eval_trajectories << "\n";
  out << "eval_interval: " << c.eval_interval << "\n";
  out << "desk_scale: " << fmt_double(c.desk_scale) << "\n";
  out << "use_normalized_env: " << (c.use_normalized_env ? "True" : "False") << "\n";
  out << "replay_capacity: " << c.replay_capacity << "\n";
  out << "workers: " << c.workers << "\n";
  out << "sac_layer_size: " << c.sac_layer_size << "\n";
  out << "policy_net_lr: " << fmt_double(c.policy_net_lr) << "\n";
  out << "automatic_entropy_tuning: " << (c.automatic_entropy_tuning ? "True" : "False") << "\n";
  out << "sac_alpha: " << fmt_double(c.sac_alpha) << "\n";
  out << "gamma: " << fmt_double(c.gamma) << "\n";
  out << "tau_polyak: " << fmt_double(c.tau_polyak) << "\n";
  out << "reward_scale: " << fmt_double(c.reward_scale) << "\n";
  out << "latent_size: " << c.latent_size << "\n";
  out << "num_training_steps_policy: " << c.num_training_steps_policy << "\n";
  out << "num_transitions_initial: " << c.num_transitions_initial << "\n";
  out << "num_transitions_per_episode: " << c.num_transitions_per_episode << "\n";
  out << "time_steps: " << c.time_steps << "\n";
  out << "use_trajectory_sample_sac: " << (c.use_trajectory_sample_sac ? "True" : "False") << "\n";
  out << "retain_hidden: " << (c.retain_hidden ? "True" : "False") << "\n";
  out << "use_reward_normalization: " << (c.use_reward_normalization ? "True" : "False") << "\n";
  out << "bayes_adaptive: " << (c.bayes_adaptive ? "True" : "False") << "\n";
  out << "policy_use_cat_probs: " << (c.policy_use_cat_probs ? "True" : "False") << "\n";
  out << "policy_dim_preprocess: " << (c.policy_dim_preprocess ? "True" : "False") << "\n";
  out << "state_embed_dim: " << c.state_embed_dim << "\n";
  out << "latent_embed_dim: " << c.latent_embed_dim << "\n";
  out << "clip_grad_policy: " << (c.clip_grad_policy ? "True" : "False") << "\n";
  out << "max_grad_norm_policy: " << fmt_double(c.max_grad_norm_policy) << "\n";
  out << "lr_encoder: " << fmt_double(c.lr_encoder) << "\n";
  out << "lr_decoder: " << fmt_double(c.lr_decoder) << "\n";
  out << "num_classes: " << c.num_classes << "\n";
  out << "alpha: " << fmt_double(c.alpha) << "\n";
  out << "beta: " << fmt_double(c.beta) << "\n";
  out << "gru_hidden_size: " << c.gru_hidden_size << "\n";
  out << "decoder_hidden_size: " << c.decoder_hidden_size << "\n";
  out << "num_training_steps_reconstruction: " << c.num_training_steps_reconstruction << "\n";
  out << "clip_grad_vae: " << (c.clip_grad_vae ? "True" : "False") << "\n";
  out << "max_grad_norm_vae: " << fmt_double(c.max_grad_norm_vae) << "\n";
  out << "use_global_prior: " << (c.use_global_prior ? "True" : "False") << "\n";
  out << "use_contrastive: " << (c.use_contrastive ? "True" : "False") << "\n";
  out << "contrastive_weight: " << fmt_double(c.contrastive_weight) << "\n";
  out << "n_queries: " << c.n_queries << "\n";
  out << "n_keys: " << c.n_keys << "\n";
  return out.str();
}

void validate(const RunConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ValidationError("config field '" + field + "': " + why);
  };
  if (c.num_classes < 1) fail("num_classes", "must be >= 1");
  if (c.latent_size < 1) fail("latent_size", "must be >= 1");
  if (!(c.gamma > 0.0 && c.gamma < 1.0)) fail("gamma", "must lie in (0, 1)");
  if (c.lr_encoder <= 0.0) fail("lr_encoder", "must be > 0");
  if (c.lr_decoder <= 0.0) fail("lr_decoder", "must be > 0");
  if (c.policy_net_lr <= 0.0) fail("policy_net_lr", "must be > 0");
  if (c.sac_alpha < 0.0) fail("sac_alpha", "must be >= 0");
  if (c.alpha < 0.0) fail("alpha", "must be >= 0");
  if (c.beta < 0.0) fail("beta", "must be >= 0");
  if (c.use_contrastive && c.n_keys < 2)
    fail("n_keys", "must be >= 2 when use_contrastive is set");
  if (c.n_queries < 1) fail("n_queries", "must be >= 1");
  if (c.batch_size_reconstruction < 1) fail("batch_size_reconstruction", "must be >= 1");
  if (c.batch_size_policy < 1) fail("batch_size_policy", "must be >= 1");
  if (c.time_steps < 1) fail("time_steps", "must be >= 1");
  if (c.max_path_length < 1) fail("max_path_length", "must be >= 1");
  if (c.n_train_tasks < 1) fail("n_train_tasks", "must be >= 1");
  if (c.n_eval_tasks < 1) fail("n_eval_tasks", "must be >= 1");
  if (c.num_train_tasks_per_episode < 1) fail("num_train_tasks_per_episode", "must be >= 1");
  if (c.num_eval_trajectories < 1) fail("num_eval_trajectories", "must be >= 1");
  if (c.eval_interval < 1) fail("eval_interval", "must be >= 1");
  if (c.desk_scale <= 0.0) fail("desk_scale", "must be > 0");
  if (c.replay_capacity < c.max_path_length)
    fail("replay_capacity", "must hold at least one trajectory");
  if (c.workers < 1) fail("workers", "must be >= 1");
  if (!(c.tau_polyak > 0.0 && c.tau_polyak <= 1.0)) fail("tau_polyak", "must lie in (0, 1]");
  if (c.reward_scale <= 0.0) fail("reward_scale", "must be > 0");
  if (c.gru_hidden_size < 1) fail("gru_hidden_size", "must be >= 1");
  if (c.decoder_hidden_size < 1) fail("decoder_hidden_size", "must be >= 1");
  if (c.sac_layer_size < 1) fail("sac_layer_size", "must be >= 1");
  if (c.state_embed_dim < 1) fail("state_embed_dim", "must be >= 1");
  if (c.latent_embed_dim < 1) fail("latent_embed_dim", "must be >= 1");
  if (c.max_grad_norm_policy <= 0.0) fail("max_grad_norm_policy", "must be > 0");
  if (c.max_grad_norm_vae <= 0.0) fail("max_grad_norm_vae", "must be > 0");
  if (c.contrastive_weight < 0.0) fail("contrastive_weight", "must be >= 0");
  if (c.automatic_entropy_tuning)
    fail("automatic_entropy_tuning", "only fixed-temperature SAC is implemented (set False)");
}

}  // namespace moss::core
