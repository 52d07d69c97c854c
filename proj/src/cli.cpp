// Copyright 2026 The Beaver Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "beaver/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "beaver/dispense.hpp"
#include "beaver/errors.hpp"
#include "beaver/prng.hpp"
#include "beaver/ring.hpp"
#include "beaver/spdz.hpp"
#include "beaver/transport.hpp"
#include "beaver/triplegen.hpp"

namespace beaver::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Throughput of the original interpreted prototype, printed as context
// next to measured rates. Not a pass/fail gate.
constexpr double kReferenceEncPerSec = 3333.0;

std::string hex64(uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

int64_t mod_t(__int128 v, int64_t t) {
  return ring::center_mod_wide(v, t);
}

void require_prime_moduli(const Config& cfg) {
  if (!ring::is_probable_prime(cfg.q)) {
    throw ParamError("q = " + std::to_string(cfg.q) +
                     " must be prime (constraint: q prime, t prime, t < q)");
  }
  if (!ring::is_probable_prime(static_cast<uint64_t>(cfg.t))) {
    throw ParamError("t = " + std::to_string(cfg.t) +
                     " must be prime (constraint: q prime, t prime, t < q)");
  }
}

void write_file(const fs::path& path, std::span<const uint8_t> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) {
    throw IoError("short write to " + path.string());
  }
}

json params_json(const Config& cfg) {
  return json{{"n", cfg.n},
              {"q", cfg.q},
              {"t", cfg.t},
              {"sigma", cfg.sigma},
              {"tail_bound", cfg.tail_bound}};
}

void emit(std::ostream& out, const json& report) {
  out << report.dump(2) << "\n";
}

struct DemoOpts {
  std::string demo = "spdz-mul";
  int64_t x = 3;
  int64_t y = 4;
  std::vector<int64_t> weights{1, 2, 3};
  int64_t bias = 4;
  std::vector<int64_t> input{5, 6, 7};
  bool reveal = false;
};

void add_demo_options(CLI::App* sub, DemoOpts& opts) {
  sub->add_option("--demo", opts.demo, "Demo circuit")
      ->check(CLI::IsMember({"spdz-mul", "dot-product"}))
      ->capture_default_str();
  sub->add_option("--x", opts.x, "Left factor (spdz-mul)")
      ->capture_default_str();
  sub->add_option("--y", opts.y, "Right factor (spdz-mul)")
      ->capture_default_str();
  sub->add_option("--weights", opts.weights,
                  "Weight vector, comma separated (dot-product)")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_option("--bias", opts.bias, "Bias term (dot-product)")
      ->capture_default_str();
  sub->add_option("--input", opts.input,
                  "Input vector, comma separated (dot-product)")
      ->delimiter(',')
      ->capture_default_str();
  sub->add_flag("--reveal", opts.reveal,
                "Include inputs and the cleartext check in the report");
}

int cmd_keygen(const Config& cfg, bool force, std::ostream& out,
               std::ostream& err) {
  require_prime_moduli(cfg);
  auto params = cfg.ahe_params();
  const uint64_t seed = cfg.resolve_seed();
  Prng rng = Prng(seed).derive("keygen");
  auto keys = ahe::keygen(params, rng);

  fs::create_directories(cfg.out_dir);
  const fs::path pk_path = fs::path(cfg.out_dir) / "pk.bin";
  const fs::path sk_path = fs::path(cfg.out_dir) / "sk.bin";
  if (!force && (fs::exists(pk_path) || fs::exists(sk_path))) {
    throw IoError("key files already exist in " + cfg.out_dir +
                  " (pass --force to overwrite)");
  }
  auto pk_bytes = ahe::to_bytes(keys.pk);
  auto sk_bytes = ahe::to_bytes(keys.sk);
  write_file(pk_path, pk_bytes);
  write_file(sk_path, sk_bytes);

  emit(out, json{{"command", "keygen"},
                 {"seed", hex64(seed)},
                 {"params", params_json(cfg)},
                 {"pk_path", pk_path.string()},
                 {"sk_path", sk_path.string()},
                 {"pk_sha256", transport::sha256_hex(pk_bytes)},
                 {"sk_sha256", transport::sha256_hex(sk_bytes)}});
  err << "wrote " << pk_path.string() << " and " << sk_path.string() << "\n";
  return kExitOk;
}

int cmd_triples(const Config& cfg, uint64_t count, bool verify,
                std::ostream& out, std::ostream& err) {
  require_prime_moduli(cfg);
  auto params = cfg.ahe_params();
  if (count < 1) {
    throw ParamError("--count must be >= 1");
  }
  const uint64_t seed = cfg.resolve_seed();
  triplegen::TripleGenerator gen(params, seed);
  auto batch = gen.batch(count);

  std::vector<triplegen::TripleShare> alice, bob, all;
  alice.reserve(count);
  bob.reserve(count);
  all.reserve(2 * count);
  for (const auto& [a, b] : batch.triples) {
    alice.push_back(a);
    bob.push_back(b);
    all.push_back(a);
    all.push_back(b);
  }

  fs::create_directories(cfg.out_dir);
  const fs::path alice_path = fs::path(cfg.out_dir) / "alice.jsonl";
  const fs::path bob_path = fs::path(cfg.out_dir) / "bob.jsonl";
  const fs::path bin_path = fs::path(cfg.out_dir) / "triples.btr";
  {
    std::ofstream fa(alice_path, std::ios::trunc);
    std::ofstream fb(bob_path, std::ios::trunc);
    if (!fa || !fb) {
      throw IoError("cannot open share files in " + cfg.out_dir);
    }
    triplegen::write_share_jsonl(fa, alice);
    triplegen::write_share_jsonl(fb, bob);
  }
  {
    std::ofstream fbin(bin_path, std::ios::binary | std::ios::trunc);
    if (!fbin) {
      throw IoError("cannot open " + bin_path.string());
    }
    triplegen::write_btr1(fbin, all);
  }

  json report{{"command", "triples"},
              {"count", count},
              {"seed", hex64(seed)},
              {"seconds", batch.seconds},
              {"stream_digest", batch.stream_digest_hex},
              {"files",
               {{"alice", alice_path.string()},
                {"bob", bob_path.string()},
                {"binary", bin_path.string()}}}};
  if (batch.seconds > 0) {
    report["triples_per_sec"] = static_cast<double>(count) / batch.seconds;
  }

  if (verify) {
    size_t valid = 0;
    for (const auto& [a, b] : batch.triples) {
      std::array<triplegen::TripleShare, 2> pair{a, b};
      auto triple = triplegen::reconstruct(pair);
      if (triple.c == mod_t(static_cast<__int128>(triple.a) * triple.b,
                            params.t)) {
        ++valid;
      }
    }
    report["verified"] = valid;
    if (valid != count) {
      emit(out, report);
      err << "verification failed: " << (count - valid) << " bad triples\n";
      return kExitProtocol;
    }
  }

  emit(out, report);
  err << "generated " << count << " triples in " << std::fixed
      << std::setprecision(3) << batch.seconds << " s\n";
  return kExitOk;
}

int cmd_bench_enc(const Config& cfg, uint64_t count, std::ostream& out,
                  std::ostream& err) {
  require_prime_moduli(cfg);
  auto params = cfg.ahe_params();
  const uint64_t seed = cfg.resolve_seed();
  Prng rng = Prng(seed).derive("bench-enc");
  auto keys = ahe::keygen(params, rng);

  uint64_t spot = 0;
  auto start = std::chrono::steady_clock::now();
  for (uint64_t i = 0; i < count; ++i) {
    auto ct = ahe::encrypt(keys.pk,
                           ahe::Plaintext{rng.uniform_centered(params.t)},
                           rng);
    spot ^= static_cast<uint64_t>(ct.c0[0]);
  }
  auto end = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(end - start).count();

  json report{{"command", "bench-enc"},
              {"count", count},
              {"seed", hex64(seed)},
              {"seconds", seconds},
              {"spot_check", hex64(spot)},
              {"reference_enc_per_sec", kReferenceEncPerSec},
              {"reference_note",
               "interpreted-prototype rate on a laptop core; context only"}};
  if (count > 0 && seconds > 0) {
    report["enc_per_sec"] = static_cast<double>(count) / seconds;
  }
  emit(out, report);
  err << "encrypted " << count << " plaintexts in " << std::fixed
      << std::setprecision(3) << seconds << " s\n";
  return kExitOk;
}

// Offline + online pipeline shared by `demo` and `export-transcript`.
// Returns the report; the bus (and so the transcript) stays with the
// caller.
json run_demo_pipeline(const Config& cfg, const DemoOpts& opts, uint64_t seed,
                       transport::Bus& bus) {
  require_prime_moduli(cfg);
  auto params = cfg.ahe_params();
  if (cfg.parties != cfg.servers) {
    throw ParamError(
        "online party count (" + std::to_string(cfg.parties) +
        ") must equal server count (" + std::to_string(cfg.servers) +
        "): the demo's online parties are the dispensing servers");
  }
  if (cfg.servers < 2) {
    throw ParamError("demo needs at least 2 servers");
  }
  if (opts.demo == "dot-product" &&
      opts.weights.size() != opts.input.size()) {
    throw ParamError("weights and input differ in length: " +
                     std::to_string(opts.weights.size()) + " vs " +
                     std::to_string(opts.input.size()));
  }

  bus.register_endpoint("alice");
  bus.register_endpoint("bob");
  std::vector<std::string> server_ids;
  std::vector<dispense::ServerVault> vaults;
  for (uint64_t j = 1; j <= cfg.servers; ++j) {
    std::string id = "s" + std::to_string(j);
    bus.register_endpoint(id);
    vaults.emplace_back(id, params.t);
    server_ids.push_back(std::move(id));
  }

  const size_t need =
      opts.demo == "dot-product" ? opts.input.size() + 1 : 1;
  triplegen::TripleGenerator gen(params, seed);
  Prng root(seed);
  Prng disp_alice = root.derive("dispense.alice");
  Prng disp_bob = root.derive("dispense.bob");
  for (size_t i = 0; i < need; ++i) {
    auto [share_a, share_b] = gen.next();
    for (const auto& share : {share_a, share_b}) {
      const char* origin = triplegen::party_name(share.party);
      auto receipts = dispense::dispense_triple(
          share, bus, origin, vaults,
          share.party == triplegen::Party::alice ? disp_alice : disp_bob);
      for (const auto& r : receipts) {
        if (!r.ok) {
          throw ProtocolError("dispensing triple " +
                              std::to_string(share.triple_id) + " to " +
                              r.server_id + " failed" +
                              (r.retry ? " (channel timeout)" : ""));
        }
      }
    }
  }

  spdz::Session session(bus, server_ids, params.t, root.derive("online"));
  for (size_t i = 0; i < need; ++i) {
    session.load_from_vaults(vaults, i);
  }

  json report{{"command", "demo"},
              {"demo", opts.demo},
              {"seed", hex64(seed)},
              {"parties", cfg.parties},
              {"servers", cfg.servers}};
  int64_t result = 0;
  int64_t expected = 0;
  size_t consumed = 0;
  json inputs;
  if (opts.demo == "spdz-mul") {
    session.share_input(0, "x", opts.x);
    session.share_input(1, "y", opts.y);
    session.beaver_mul("xy", "x", "y", session.take_fresh_triple());
    result = session.open("xy").value;
    consumed = 1;
    expected = mod_t(static_cast<__int128>(opts.x) * opts.y, params.t);
    inputs = json{{"x", opts.x}, {"y", opts.y}};
  } else {
    auto demo = spdz::dot_product_demo(session, opts.weights, opts.bias,
                                       opts.input);
    result = demo.value;
    consumed = demo.triples_consumed;
    __int128 acc = opts.bias;
    for (size_t i = 0; i < opts.weights.size(); ++i) {
      acc += static_cast<__int128>(opts.weights[i]) * opts.input[i];
    }
    expected = mod_t(acc, params.t);
    inputs = json{{"weights", opts.weights},
                  {"bias", opts.bias},
                  {"input", opts.input}};
  }

  report["result"] = result;
  report["triples_consumed"] = consumed;
  report["rounds"] = session.rounds();
  json bytes;
  for (const auto& id : bus.endpoints()) {
    bytes[id] = bus.bytes_sent(id);
  }
  report["bytes_sent"] = bytes;
  report["messages"] = bus.transcript().message_count();
  report["transcript_digest"] = bus.transcript().digest_hex();
  if (opts.reveal) {
    report["reveal"] = json{{"inputs", inputs},
                            {"expected", expected},
                            {"matches", result == expected}};
  }
  if (result != expected) {
    throw ProtocolError("demo result " + std::to_string(result) +
                        " does not match the cleartext value " +
                        std::to_string(expected));
  }
  return report;
}

int cmd_demo(const Config& cfg, const DemoOpts& opts, std::ostream& out,
             std::ostream& err) {
  const uint64_t seed = cfg.resolve_seed();
  transport::Bus bus(Prng(seed).derive("bus").seed());
  json report = run_demo_pipeline(cfg, opts, seed, bus);
  emit(out, report);
  err << opts.demo << " opened " << report["result"] << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& dir, const std::string& bin_path,
               std::ostream& out, std::ostream& err) {
  std::vector<triplegen::TripleShare> shares;
  json source;
  if (!bin_path.empty()) {
    std::ifstream f(bin_path, std::ios::binary);
    if (!f) {
      throw IoError("cannot open " + bin_path);
    }
    shares = triplegen::read_btr1(f);
    source = bin_path;
  } else {
    const fs::path alice_path = fs::path(dir) / "alice.jsonl";
    const fs::path bob_path = fs::path(dir) / "bob.jsonl";
    for (const auto& path : {alice_path, bob_path}) {
      std::ifstream f(path);
      if (!f) {
        throw IoError("cannot open " + path.string());
      }
      auto part = triplegen::read_share_jsonl(f);
      shares.insert(shares.end(), part.begin(), part.end());
    }
    source = json{{"alice", alice_path.string()}, {"bob", bob_path.string()}};
  }

  std::map<uint64_t, std::vector<triplegen::TripleShare>> by_id;
  for (const auto& sh : shares) {
    by_id[sh.triple_id].push_back(sh);
  }
  size_t valid = 0;
  std::vector<uint64_t> invalid;
  for (const auto& [id, group] : by_id) {
    bool ok = group.size() == 2;
    if (ok) {
      auto triple = triplegen::reconstruct(group);
      ok = triple.c ==
           mod_t(static_cast<__int128>(triple.a) * triple.b, group[0].t);
    }
    if (ok) {
      ++valid;
    } else if (invalid.size() < 10) {
      invalid.push_back(id);
    }
  }

  json report{{"command", "verify"},
              {"source", source},
              {"triples", by_id.size()},
              {"valid", valid},
              {"invalid", by_id.size() - valid}};
  if (!invalid.empty()) {
    report["invalid_ids"] = invalid;
  }
  emit(out, report);
  err << valid << "/" << by_id.size() << " triples valid\n";
  return valid == by_id.size() ? kExitOk : kExitProtocol;
}

int cmd_export_transcript(const Config& cfg, const DemoOpts& opts,
                          const std::string& out_file, std::ostream& out,
                          std::ostream& err) {
  const uint64_t seed = cfg.resolve_seed();
  transport::Bus bus(Prng(seed).derive("bus").seed(),
                     /*retain_transcript=*/true);
  json demo_report = run_demo_pipeline(cfg, opts, seed, bus);

  fs::path path = out_file.empty()
                      ? fs::path(cfg.out_dir) / "transcript.jsonl"
                      : fs::path(out_file);
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) {
    throw IoError("cannot open " + path.string());
  }
  bus.transcript().export_jsonl(f);
  if (!f) {
    throw IoError("short write to " + path.string());
  }

  emit(out, json{{"command", "export-transcript"},
                 {"demo", opts.demo},
                 {"seed", hex64(seed)},
                 {"path", path.string()},
                 {"messages", bus.transcript().message_count()},
                 {"transcript_digest", bus.transcript().digest_hex()}});
  err << "wrote " << bus.transcript().message_count() << " envelopes to "
      << path.string() << "\n";
  return kExitOk;
}

}  // namespace

ahe::AheParams Config::ahe_params() const {
  if (q > static_cast<uint64_t>(INT64_MAX)) {
    throw ParamError("q = " + std::to_string(q) +
                     " exceeds the supported 63-bit range");
  }
  ring::RingParams rp(n, static_cast<int64_t>(q), sigma,
                      static_cast<int32_t>(tail_bound));
  return ahe::AheParams(rp, t);
}

uint64_t Config::resolve_seed() const {
  if (seed_hex.empty()) {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) ^ rd();
  }
  return Prng::from_hex(seed_hex).seed();
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Beaver triple forge: offline triple generation from "
               "additive-only homomorphic encryption, dispensing, and the "
               "SPDZ-style online phase"};
  app.name("beaver-forge");

  Config cfg;
  app.set_config("--config", "", "Key=value config file")
      ->envname("BEAVER_FORGE_CONFIG");
  app.add_option("--n", cfg.n, "Polynomial degree, a power of two")
      ->capture_default_str();
  app.add_option("--q", cfg.q, "Coefficient modulus (prime)")
      ->capture_default_str();
  app.add_option("--t", cfg.t, "Plaintext modulus (prime)")
      ->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "Gaussian width")
      ->capture_default_str();
  app.add_option("--tail-bound", cfg.tail_bound,
                 "Gaussian truncation, in units of sigma")
      ->capture_default_str();
  app.add_option("--parties", cfg.parties, "Online party count")
      ->capture_default_str();
  app.add_option("--servers", cfg.servers, "Dispensing server count")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed_hex,
                 "Master seed as hex; omit for a random one");
  app.add_option("--out", cfg.out_dir, "Output directory")
      ->capture_default_str();
  app.require_subcommand(1);

  auto* keygen = app.add_subcommand("keygen", "Generate and store a key pair");
  keygen->fallthrough();
  bool force = false;
  keygen->add_flag("--force", force, "Overwrite existing key files");

  auto* triples =
      app.add_subcommand("triples", "Batch-generate Beaver triples");
  triples->fallthrough();
  uint64_t triple_count = 1000;
  bool verify_after = false;
  triples->add_option("--count", triple_count, "Triples to generate")
      ->capture_default_str();
  triples->add_flag("--verify", verify_after,
                    "Re-check every generated triple");

  auto* bench =
      app.add_subcommand("bench-enc", "Measure encryption throughput");
  bench->fallthrough();
  uint64_t bench_count = 1000000;
  bench->add_option("--count", bench_count, "Encryptions to run")
      ->capture_default_str();

  auto* demo = app.add_subcommand(
      "demo", "Full pipeline: generate, dispense, run the online phase");
  demo->fallthrough();
  DemoOpts demo_opts;
  add_demo_options(demo, demo_opts);

  auto* verify = app.add_subcommand("verify", "Validate stored triples");
  verify->fallthrough();
  std::string verify_dir;
  std::string verify_bin;
  verify->add_option("--dir", verify_dir,
                     "Directory holding alice.jsonl and bob.jsonl");
  verify->add_option("--bin", verify_bin, "Binary triple file to check");

  auto* exportt = app.add_subcommand(
      "export-transcript", "Run a demo and save its transcript");
  exportt->fallthrough();
  DemoOpts export_opts;
  add_demo_options(exportt, export_opts);
  std::string transcript_file;
  exportt->add_option("--out-file", transcript_file,
                      "Transcript path (default <out>/transcript.jsonl)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitParam;
  }

  try {
    if (keygen->parsed()) {
      return cmd_keygen(cfg, force, out, err);
    }
    if (triples->parsed()) {
      return cmd_triples(cfg, triple_count, verify_after, out, err);
    }
    if (bench->parsed()) {
      return cmd_bench_enc(cfg, bench_count, out, err);
    }
    if (demo->parsed()) {
      return cmd_demo(cfg, demo_opts, out, err);
    }
    if (verify->parsed()) {
      return cmd_verify(verify_dir.empty() ? cfg.out_dir : verify_dir,
                        verify_bin, out, err);
    }
    if (exportt->parsed()) {
      return cmd_export_transcript(cfg, export_opts, transcript_file, out,
                                   err);
    }
    err << "no subcommand given\n";
    return kExitParam;
  } catch (const ParamError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kExitParam;
  } catch (const TransportError& e) {
    err << "protocol abort: " << e.what() << "\n";
    return kExitProtocol;
  } catch (const ProtocolError& e) {
    err << "protocol abort: " << e.what() << "\n";
    return kExitProtocol;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

int run(int argc, const char* const* argv) {
  return run(argc, argv, std::cout, std::cerr);
}

}  // namespace beaver::cli
