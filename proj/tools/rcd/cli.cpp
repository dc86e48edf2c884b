// Copyright 2026 The rcd Authors
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "rcd/error.hpp"
#include "rcd/games/games.hpp"
#include "rcd/protocols/system.hpp"

namespace rcd::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using protocols::SchemeTag;
using protocols::System;

constexpr char kSystemFile[] = "system.json";
constexpr char kSeedEnv[] = "RCD_TEST_SEED";

/// Failure with a machine-readable reason and a fixed exit code.
struct Exit {
  int code;
  std::string reason;
  std::string detail;
};

[[noreturn]] void config_error(const std::string& msg) { throw Error(Errc::kConfigError, msg); }

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::kConfigError:
    case Errc::kParameterError:
    case Errc::kPolicyTooDeep:
      return kConfig;
    case Errc::kIoError:
    case Errc::kDecodeError:
    case Errc::kMalformedKey:
      return kIo;
    default:
      return kSchemeError;
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(Errc::kDecodeError, path.string() + ": " + e.what());
  }
}

/// Writes to a sibling temporary file, then renames over the target.
void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::kIoError, "cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw Error(Errc::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::kIoError, "cannot replace " + path.string());
  }
}

void write_json(const fs::path& path, json j) { write_atomic(path, j.dump(2) + "\n"); }

json versioned(const char* kind, json body) {
  body["version"] = kFormatVersion;
  body["kind"] = kind;
  return body;
}

json expect_kind(const fs::path& path, const char* kind) {
  auto j = read_json(path);
  if (j.value("kind", "") != kind)
    throw Error(Errc::kDecodeError, path.string() + " is not a " + std::string(kind) + " file");
  if (j.value("version", 0) != kFormatVersion)
    throw Error(Errc::kDecodeError, path.string() + " has unsupported version");
  return j;
}

System load_system(const fs::path& dir) {
  auto j = expect_kind(dir / kSystemFile, "system");
  return System::from_json(j.at("system"));
}

void save_system(const fs::path& dir, const System& sys) {
  write_json(dir / kSystemFile, versioned("system", {{"system", sys.to_json()}}));
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  if (const char* env = std::getenv(kSeedEnv)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      config_error(std::string(kSeedEnv) + " is not an unsigned integer");
    }
  }
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

BitString parse_bits(const std::string& text, std::size_t expected, const char* what) {
  BitString b;
  try {
    b = BitString::from_string(text);
  } catch (const Error&) {
    config_error(std::string(what) + " must be a 0/1 string");
  }
  if (b.size() != expected)
    config_error(std::string(what) + " has " + std::to_string(b.size()) + " bits, expected " + std::to_string(expected));
  return b;
}

rabe::Policy parse_policy(const std::string& text) {
  try {
    return rabe::Policy::parse(text);
  } catch (const Error& e) {
    config_error("policy: " + std::string(e.what()));
  }
}

struct UserFile {
  SchemeTag scheme;
  protocols::UserKey key;
};

UserFile load_user(const fs::path& path) {
  auto j = expect_kind(path, "user-key");
  auto scheme = protocols::scheme_from_string(j.at("scheme").get<std::string>());
  auto pk = protocols::deserialize_public_key(scheme, from_hex(j.at("pk").get<std::string>()));
  auto sk = protocols::deserialize_secret_key(scheme, from_hex(j.at("sk").get<std::string>()));
  return {scheme, {std::move(pk), std::move(sk), parse_policy(j.at("policy").get<std::string>())}};
}

void check_scheme(const System& sys, SchemeTag other, const fs::path& path) {
  if (sys.scheme() != other)
    config_error(path.string() + " belongs to " + std::string(protocols::to_string(other)) + ", directory is " +
                 std::string(protocols::to_string(sys.scheme())));
}

// Commands

struct SetupArgs {
  std::string scheme = "privcd";
  std::size_t lambda = 16;
  std::size_t tau = 8;
  std::size_t ellm = 8;
  std::size_t depth = rabe::kDefaultMaxDepth;
  std::string dir;
};

json cmd_setup(const SetupArgs& a, std::uint64_t seed) {
  protocols::SchemeParams p;
  p.lambda = a.lambda;
  p.tau = a.tau;
  p.message_bits = a.ellm;
  p.max_depth = a.depth;
  p.validate();
  Rng rng(seed);
  auto sys = System::setup(protocols::scheme_from_string(a.scheme), p, rng);
  fs::create_directories(a.dir);
  save_system(a.dir, sys);
  return {{"scheme", std::string(protocols::to_string(sys.scheme()))}, {"params", p.to_json()}, {"epoch", 0}};
}

json cmd_keygen(const std::string& dir, const std::string& policy, const std::string& out, std::uint64_t seed) {
  auto sys = load_system(dir);
  Rng rng(seed);
  auto key = sys.keygen(parse_policy(policy), rng);
  auto pk_hex = to_hex(protocols::serialize_key(key.pk));
  write_json(out, versioned("user-key", {{"scheme", std::string(protocols::to_string(sys.scheme()))},
                                         {"policy", key.policy.to_string()},
                                         {"pk", pk_hex},
                                         {"sk", to_hex(protocols::serialize_key(key.sk))}}));
  return {{"key", games::key_id(key.pk)}, {"policy", key.policy.to_string()}};
}

json cmd_register(const std::string& dir, const std::string& key_path) {
  auto sys = load_system(dir);
  auto user = load_user(key_path);
  check_scheme(sys, user.scheme, key_path);
  auto epoch = sys.register_key(user.key.pk, user.key.policy);
  save_system(dir, sys);
  return {{"key", games::key_id(user.key.pk)}, {"epoch", epoch}};
}

json cmd_update(const std::string& dir, const std::string& key_path, const std::string& out) {
  auto sys = load_system(dir);
  auto user = load_user(key_path);
  check_scheme(sys, user.scheme, key_path);
  auto hsk = sys.update(user.key.pk);
  write_json(out, versioned("helper-key", {{"scheme", std::string(protocols::to_string(sys.scheme()))},
                                           {"epoch", sys.epoch()},
                                           {"hsk", to_hex(protocols::serialize_key(hsk))}}));
  return {{"key", games::key_id(user.key.pk)}, {"epoch", sys.epoch()}, {"path_length", protocols::path_length(hsk)}};
}

json ct_file(const protocols::HybridCiphertext& ct) {
  return versioned("ciphertext", {{"ciphertext", ct.to_json()},
                                  {"note", "quantum registers are a classical simulation artifact"}});
}

json cmd_encrypt(const std::string& dir, const std::string& attrs, const std::string& message,
                 std::optional<std::size_t> epoch, const std::string& out, const std::string& vk_out,
                 std::uint64_t seed) {
  auto sys = load_system(dir);
  auto x = parse_bits(attrs, sys.params().tau, "attributes");
  auto mu = parse_bits(message, sys.params().message_bits, "message");
  Rng rng(seed);
  auto enc = sys.encrypt_at(epoch.value_or(sys.epoch()), x, mu, rng);
  write_json(out, ct_file(enc.ct));
  write_json(vk_out, versioned("verification-key", {{"vk", enc.vk.to_json()},
                                                    {"publishable", enc.vk.publishable()}}));
  return {{"epoch", epoch.value_or(sys.epoch())}, {"vk_publishable", enc.vk.publishable()}};
}

protocols::HybridCiphertext load_ct(const fs::path& path) {
  return protocols::HybridCiphertext::from_json(expect_kind(path, "ciphertext").at("ciphertext"));
}

json cmd_decrypt(const std::string& dir, const std::string& key_path, const std::string& hsk_path,
                 const std::string& attrs, const std::string& ct_path, std::uint64_t seed) {
  auto sys = load_system(dir);
  auto user = load_user(key_path);
  check_scheme(sys, user.scheme, key_path);
  auto hj = expect_kind(hsk_path, "helper-key");
  auto hsk = protocols::deserialize_helper_key(sys.scheme(), from_hex(hj.at("hsk").get<std::string>()));
  auto x = parse_bits(attrs, sys.params().tau, "attributes");
  auto ct = load_ct(ct_path);
  auto before = ct.to_json();
  Rng rng(seed);
  auto m = sys.decrypt(user.key.sk, hsk, x, ct, rng);
  // Decryption may spend a token or collapse a register; keep the file in step.
  if (ct.to_json() != before) write_json(ct_path, ct_file(ct));
  if (m.is_get_update()) throw Exit{kGetUpdate, "get-update", "helper key is stale; run update"};
  if (!m.is_ok()) throw Exit{kBottom, "bottom", "decryption returned bottom"};
  return {{"message", m.value().to_string()}};
}

json cmd_delete(const std::string& ct_path, const std::string& out, std::uint64_t seed) {
  auto ct = load_ct(ct_path);
  Rng rng(seed);
  auto cert = System::erase(ct, rng);
  write_json(ct_path, ct_file(ct));
  write_json(out, versioned("certificate", {{"cert", cert.to_json()}}));
  return {{"payload_bits", cert.payload.size()}};
}

json cmd_verify(const std::string& vk_path, const std::string& cert_path) {
  auto vk = protocols::VerificationKey::from_json(expect_kind(vk_path, "verification-key").at("vk"));
  auto cert = DeletionCert::from_json(expect_kind(cert_path, "certificate").at("cert"));
  if (!System::verify(vk, cert)) throw Exit{kVerificationFailed, "verification-failed", "certificate rejected"};
  return {{"valid", true}};
}

// run-game

struct GameArgs {
  std::string scheme = "privcd";
  std::string experiment;
  std::string adversary;
  std::string variant = "private";
  std::size_t trials = 100;
  std::size_t lambda = 16;
  std::size_t tau = 8;
  std::size_t ellm = 8;
  std::size_t queries = 200;
  std::size_t jobs = 1;
  std::string transcript;
  std::string summary;
};

void append_transcripts(std::string& out, const std::vector<games::ExperimentResult>& rs, int b,
                        std::uint64_t base) {
  for (std::size_t i = 0; i < rs.size(); ++i) {
    out += json{{"event", "trial"}, {"index", i}, {"b", b}, {"seed", games::trial_seed(base, i)}}.dump();
    out += '\n';
    out += rs[i].transcript.to_jsonl();
  }
}

double bottom_rate(const std::vector<games::ExperimentResult>& rs) {
  std::size_t n = 0;
  for (const auto& r : rs) n += r.is_bottom();
  return rs.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(rs.size());
}

json cmd_run_game(GameArgs a, std::uint64_t seed) {
  using namespace games;
  if (a.trials == 0) config_error("--trials must be positive");
  auto experiment = experiment_from_string(a.experiment);
  GameConfig cfg;
  cfg.params.lambda = a.lambda;
  cfg.params.tau = a.tau;
  cfg.params.message_bits = a.ellm;
  cfg.params.validate();

  json summary = {{"experiment", std::string(to_string(experiment))},
                  {"trials", a.trials},
                  {"seed", seed},
                  {"lambda", a.lambda},
                  {"tau", a.tau},
                  {"ellm", a.ellm}};
  std::string transcript;

  if (experiment == Experiment::kDecryptionGame || experiment == Experiment::kVerificationGame) {
    auto scheme = protocols::scheme_from_string(a.scheme);
    if (a.adversary.empty()) a.adversary = "honest-mix";
    if (a.adversary != "honest-mix" && a.adversary != "epoch-gap")
      config_error("correctness games take honest-mix or epoch-gap");
    std::vector<GameVerdict> verdicts(a.trials);
    run_trials(a.trials, a.jobs, [&](std::size_t i) {
      auto adv = a.adversary == "honest-mix" ? make_honest_mix(a.queries) : make_epoch_gap(a.queries, 1);
      GameConfig c = cfg;
      c.seed = trial_seed(seed, i);
      verdicts[i] = experiment == Experiment::kDecryptionGame ? run_decryption_game(scheme, *adv, c)
                                                              : run_verification_game(scheme, *adv, c);
      return ExperimentResult{};
    });
    std::size_t wins = 0, updates = 0;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      wins += verdicts[i].b == 1;
      updates += verdicts[i].updates;
      transcript += json{{"event", "trial"}, {"index", i}, {"seed", trial_seed(seed, i)}}.dump() + "\n";
      transcript += verdicts[i].transcript.to_jsonl();
    }
    summary["scheme"] = std::string(protocols::to_string(scheme));
    summary["adversary"] = a.adversary;
    summary["b"] = wins == a.trials ? 1 : 0;
    summary["games_won"] = wins;
    summary["updates"] = updates;
  } else {
    bool cel = experiment == Experiment::kCel;
    if (a.adversary.empty()) a.adversary = cel ? "honest-measurer" : "honest-deleter";
    CelVariant variant = CelVariant::kPrivate;
    if (cel) {
      if (a.variant == "public") variant = CelVariant::kPublic;
      else if (a.variant != "private") config_error("--variant is private or public");
      make_cel_adversary(a.adversary);
    } else {
      make_adversary(a.adversary);
    }
    SchemeTag scheme = cel || experiment == Experiment::kExpShad ? SchemeTag::kPriVCD
                                                                 : protocols::scheme_from_string(a.scheme);

    std::vector<ExperimentResult> rs[2];
    for (int b : {0, 1}) {
      std::uint64_t base = trial_seed(seed, static_cast<std::uint64_t>(b));
      rs[b] = run_trials(a.trials, a.jobs, [&](std::size_t i) {
        std::uint64_t s = trial_seed(base, i);
        if (cel) {
          auto adv = make_cel_adversary(a.adversary);
          CelConfig c;
          c.lambda = a.lambda;
          c.seed = s;
          return run_cel_experiment(variant, b, *adv, c);
        }
        auto adv = make_adversary(a.adversary);
        GameConfig c = cfg;
        c.seed = s;
        switch (experiment) {
          case Experiment::kExpCd:
            return run_exp_cd(scheme, b, *adv, c);
          case Experiment::kExpCed:
            return run_exp_ced(scheme, b, *adv, c);
          default:
            return run_exp_shad(b, *adv, c);
        }
      });
      append_transcripts(transcript, rs[b], b, base);
    }

    if (cel) summary["variant"] = a.variant;
    else if (experiment != Experiment::kExpShad) summary["scheme"] = std::string(protocols::to_string(scheme));
    summary["adversary"] = a.adversary;
    summary["bottom_rate"] = {bottom_rate(rs[0]), bottom_rate(rs[1])};
    auto adv = estimate_advantage(rs[0], rs[1]);
    summary["advantage"] = adv.advantage;
    summary["ci"] = {adv.ci_low, adv.ci_high};
    summary["p1_given_b"] = {adv.p0, adv.p1};

    if (experiment == Experiment::kExpCed || cel) {
      summary["handle"] = "idealized-hiding";
      json td = {{"empirical", td_agreement(qstate::Distribution("residual"), qstate::Distribution("residual"),
                                            rs[0], rs[1])
                                   .empirical}};
      bool honest = a.adversary == (cel ? "honest-measurer" : "honest-deleter");
      if (honest && a.lambda <= 8) {
        auto e0 = cel ? exact_cel_residual(variant, 0, a.lambda) : exact_ced_residual(scheme, 0, a.lambda);
        auto e1 = cel ? exact_cel_residual(variant, 1, a.lambda) : exact_ced_residual(scheme, 1, a.lambda);
        auto agree = td_agreement(e0, e1, rs[0], rs[1]);
        td["exact"] = agree.exact;
        td["agree"] = agree.agree;
        td["max_z"] = agree.max_z;
      }
      summary["td"] = td;
    }
  }

  if (!a.transcript.empty()) write_atomic(a.transcript, transcript);
  if (!a.summary.empty()) write_json(a.summary, summary);
  return summary;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rcd: registered attribute-based encryption with certified deletion (classical simulation)"};
  app.name(args.empty() ? "rcd" : args.front());
  app.require_subcommand(1);
  std::optional<std::uint64_t> seed;
  app.add_option("--seed", seed, "RNG seed (default: $RCD_TEST_SEED, else random)");

  SetupArgs setup;
  auto* c_setup = app.add_subcommand("setup", "create a scheme instance in a directory");
  c_setup->add_option("--scheme", setup.scheme, "privcd, pubvcd, privced or pubvced")->capture_default_str();
  c_setup->add_option("--lambda", setup.lambda)->capture_default_str();
  c_setup->add_option("--tau", setup.tau, "attribute bits")->capture_default_str();
  c_setup->add_option("--ellm", setup.ellm, "message bits")->capture_default_str();
  c_setup->add_option("--max-depth", setup.depth)->capture_default_str();
  c_setup->add_option("--dir", setup.dir)->required();

  std::string dir, policy, key, hsk, out_path, attrs, message, ct, vk, cert;
  std::optional<std::size_t> epoch;

  auto* c_keygen = app.add_subcommand("keygen", "generate a user key for a policy");
  c_keygen->add_option("--dir", dir)->required();
  c_keygen->add_option("--policy", policy, "e.g. \"x0 & (x1 | !x3)\"")->required();
  c_keygen->add_option("--out", out_path)->required();

  auto* c_register = app.add_subcommand("register", "register a user key with the curator");
  c_register->add_option("--dir", dir)->required();
  c_register->add_option("--key", key)->required();

  auto* c_update = app.add_subcommand("update", "fetch a helper key for the current directory");
  c_update->add_option("--dir", dir)->required();
  c_update->add_option("--key", key)->required();
  c_update->add_option("--out", out_path)->required();

  auto* c_encrypt = app.add_subcommand("encrypt", "encrypt a message under attributes");
  c_encrypt->add_option("--dir", dir)->required();
  c_encrypt->add_option("--attrs", attrs, "attribute bit string")->required();
  c_encrypt->add_option("--message", message, "message bit string")->required();
  c_encrypt->add_option("--epoch", epoch, "master key epoch (default: latest)");
  c_encrypt->add_option("--out", out_path)->required();
  c_encrypt->add_option("--vk", vk, "where to write the verification key")->required();

  auto* c_decrypt = app.add_subcommand("decrypt", "decrypt a ciphertext file");
  c_decrypt->add_option("--dir", dir)->required();
  c_decrypt->add_option("--key", key)->required();
  c_decrypt->add_option("--hsk", hsk)->required();
  c_decrypt->add_option("--attrs", attrs)->required();
  c_decrypt->add_option("--ct", ct)->required();

  auto* c_delete = app.add_subcommand("delete", "delete a ciphertext and write the certificate");
  c_delete->add_option("--ct", ct)->required();
  c_delete->add_option("--out", out_path)->required();

  auto* c_verify = app.add_subcommand("verify", "check a deletion certificate");
  c_verify->add_option("--vk", vk)->required();
  c_verify->add_option("--cert", cert)->required();

  GameArgs game;
  auto* c_game = app.add_subcommand("run-game", "run a correctness or security experiment");
  c_game->add_option("--experiment", game.experiment,
                     "decryption, verification, exp-cd, exp-ced, exp-shad or cel")
      ->required();
  c_game->add_option("--scheme", game.scheme)->capture_default_str();
  c_game->add_option("--adversary", game.adversary, "strategy name");
  c_game->add_option("--variant", game.variant, "cel: private or public")->capture_default_str();
  c_game->add_option("--trials", game.trials, "trials per challenge bit, or games")->capture_default_str();
  c_game->add_option("--lambda", game.lambda)->capture_default_str();
  c_game->add_option("--tau", game.tau)->capture_default_str();
  c_game->add_option("--ellm", game.ellm)->capture_default_str();
  c_game->add_option("--queries", game.queries, "correctness games: oracle calls (or gaps)")->capture_default_str();
  c_game->add_option("--jobs", game.jobs, "worker threads")->capture_default_str();
  c_game->add_option("--transcript", game.transcript, "JSON-lines transcript output");
  c_game->add_option("--summary", game.summary, "summary JSON output");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "ConfigError"}, {"reason", "usage"}, {"detail", e.what()}}.dump() << "\n";
    return kConfig;
  }

  try {
    json result;
    if (*c_setup) {
      result = cmd_setup(setup, resolve_seed(seed));
    } else if (*c_keygen) {
      result = cmd_keygen(dir, policy, out_path, resolve_seed(seed));
    } else if (*c_register) {
      result = cmd_register(dir, key);
    } else if (*c_update) {
      result = cmd_update(dir, key, out_path);
    } else if (*c_encrypt) {
      result = cmd_encrypt(dir, attrs, message, epoch, out_path, vk, resolve_seed(seed));
    } else if (*c_decrypt) {
      result = cmd_decrypt(dir, key, hsk, attrs, ct, resolve_seed(seed));
    } else if (*c_delete) {
      result = cmd_delete(ct, out_path, resolve_seed(seed));
    } else if (*c_verify) {
      result = cmd_verify(vk, cert);
    } else {
      result = cmd_run_game(game, resolve_seed(seed));
    }
    out << result.dump() << "\n";
    return kOk;
  } catch (const Exit& e) {
    err << json{{"error", e.reason}, {"reason", e.reason}, {"detail", e.detail}}.dump() << "\n";
    return e.code;
  } catch (const Error& e) {
    err << json{{"error", std::string(errc_name(e.code()))}, {"reason", e.what()}}.dump() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << json{{"error", "IoError"}, {"reason", e.what()}}.dump() << "\n";
    return kIo;
  } catch (const nlohmann::json::exception& e) {
    err << json{{"error", "DecodeError"}, {"reason", e.what()}}.dump() << "\n";
    return kIo;
  }
}

}  // namespace rcd::cli
