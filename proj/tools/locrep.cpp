// locrep: encode files into LRC/RS stripe archives, damage and repair them,
// and run the bound, flow-graph, reliability and simulation checks.
//
// Exit status: 0 ok, 1 check failed, 2 unrecoverable data, 3 invalid input,
// 4 I/O error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "locrep/archive.hpp"
#include "locrep/bounds.hpp"
#include "locrep/construct.hpp"
#include "locrep/error.hpp"
#include "locrep/lrc.hpp"
#include "locrep/reliability.hpp"
#include "locrep/sim.hpp"

using namespace locrep;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kUnrecoverable = 2, kInvalid = 3, kIoError = 4 };

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kUnrecoverable: return kUnrecoverable;
    case ErrorKind::kIo: return kIoError;
    case ErrorKind::kFormat:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kDimensionMismatch: return kInvalid;
    default: return kCheckFailed;
  }
}

std::vector<archive::Record> load(const std::string& path) {
  const auto bytes = archive::read_file(path);
  return archive::parse(bytes);
}

void store(const std::string& path, const std::vector<archive::Record>& recs) {
  archive::write_file(path, archive::serialize(recs));
}

struct EncodeArgs {
  std::string input, output, scheme = "lrc";
  std::size_t k = 10, p = 4, r = 5, block_size = 64 * 1024;
  unsigned m = 8;
};

int cmd_encode(const EncodeArgs& a) {
  archive::CodeSpec spec;
  if (a.scheme != "rs" && a.scheme != "lrc") {
    throw Error(ErrorKind::kInvalidArgument, "scheme must be rs or lrc");
  }
  spec.lrc = a.scheme == "lrc";
  spec.k = a.k;
  spec.p = a.p;
  spec.r = a.r;
  spec.m = a.m;
  spec.block_size = a.block_size;
  (void)spec.header();  // reject bad parameters before touching the input
  const auto data = archive::read_file(a.input);
  const auto recs = archive::encode_file(data, spec);
  store(a.output, recs);
  const auto& h = recs.front().header;
  std::printf("encoded %zu bytes: %zu stripe(s), %u blocks each (k=%u r=%u m=%u block_size=%u)\n",
              data.size(), recs.size(), h.n, h.k, h.r, h.m, h.block_size);
  return kOk;
}

int cmd_decode(const std::string& in, const std::string& out) {
  const auto recs = load(in);
  const auto data = archive::decode_file(recs);
  archive::write_file(out, data);
  std::printf("decoded %zu bytes from %zu stripe(s)\n", data.size(), recs.size());
  return kOk;
}

int cmd_corrupt(const std::string& path, const std::vector<std::size_t>& blocks,
                std::optional<std::size_t> stripe) {
  auto recs = load(path);
  archive::corrupt(recs, blocks, stripe);
  store(path, recs);
  std::printf("cleared blocks %s in %zu stripe(s)\n", format_positions(blocks).c_str(),
              stripe ? std::size_t{1} : recs.size());
  return kOk;
}

int cmd_repair(const std::string& path) {
  auto recs = load(path);
  const auto reports = archive::repair(recs);
  int rc = kOk;
  std::size_t total = 0, rebuilt = 0;
  for (const auto& rep : reports) {
    if (!rep.recovered) {
      std::printf("stripe %zu: unrecoverable, erased %s\n", rep.stripe,
                  format_positions(rep.erased).c_str());
      rc = kUnrecoverable;
      continue;
    }
    for (const auto& step : rep.steps) {
      std::printf("stripe %zu block %zu: %s\n", rep.stripe, step.block,
                  archive::describe(step).c_str());
    }
    if (!rep.steps.empty()) {
      std::printf("stripe %zu: %zu blocks read\n", rep.stripe, rep.blocks_read);
    }
    total += rep.blocks_read;
    rebuilt += rep.steps.size();
  }
  store(path, recs);
  std::printf("repaired %zu block(s), %zu blocks read\n", rebuilt, total);
  return rc;
}

int cmd_verify(const std::string& path) {
  const auto recs = load(path);
  int rc = kOk;
  for (const auto& c : archive::verify(recs)) {
    if (!c.recoverable) {
      std::printf("stripe %zu: unrecoverable, erased %s\n", c.stripe,
                  format_positions(c.missing).c_str());
      rc = kUnrecoverable;
    } else if (!c.mismatched.empty()) {
      std::printf("stripe %zu: mismatch at %s\n", c.stripe,
                  format_positions(c.mismatched).c_str());
      if (rc == kOk) rc = kCheckFailed;
    } else if (!c.missing.empty()) {
      std::printf("stripe %zu: ok, missing %s\n", c.stripe, format_positions(c.missing).c_str());
    } else {
      std::printf("stripe %zu: ok\n", c.stripe);
    }
  }
  return rc;
}

int cmd_bound(std::size_t n, std::size_t k, std::size_t r) {
  std::printf("%lld\n", static_cast<long long>(bounds::distance_bound(n, k, r)));
  return kOk;
}

int cmd_distance_archive(const std::string& path) {
  const auto recs = load(path);
  const auto& h = recs.front().header;
  const auto codec = archive::Codec::from_header(h);
  const std::size_t d = lrc::brute_distance(codec.field(), codec.generator());
  const std::int64_t bound = h.r ? bounds::distance_bound(h.n, h.k, h.r)
                                 : static_cast<std::int64_t>(h.n - h.k + 1);
  std::printf("d=%zu bound=%lld\n", d, static_cast<long long>(bound));
  return static_cast<std::int64_t>(d) <= bound ? kOk : kCheckFailed;
}

int cmd_distance_random(const std::vector<std::size_t>& knr, unsigned m, std::size_t trials,
                        std::uint64_t seed) {
  if (knr.size() != 3) throw Error(ErrorKind::kInvalidArgument, "--random-spec takes k,n,r");
  const construct::Shape shape{knr[0], knr[1], knr[2]};
  const auto field = gf::Field::make(m);
  const auto att = construct::construct_with_retry(*field, shape, trials, seed);
  std::printf("k=%zu n=%zu r=%zu q=2^%u d=%zu bound=%lld trials=%zu trial_seed=%llu %s\n",
              shape.k, shape.n, shape.r, m, att.achieved_d, static_cast<long long>(att.bound),
              att.trials, static_cast<unsigned long long>(att.trial_seed),
              att.bound_violated ? "BOUND VIOLATED" : att.success ? "meets bound" : "below bound");
  return att.success && !att.bound_violated ? kOk : kCheckFailed;
}

int cmd_flowcheck(std::size_t n, std::size_t k, std::size_t r, std::size_t d,
                  std::size_t samples, std::uint64_t seed) {
  const auto fg = bounds::build_flow_graph(k, n, r, d, {samples, seed});
  const auto rep = bounds::min_cut_check(fg, static_cast<std::int64_t>(k));
  std::size_t below = 0;
  for (auto f : rep.collector_flow) below += f < static_cast<std::int64_t>(k);
  std::printf("collectors=%llu evaluated=%zu required=%zu min_flow=%lld below=%zu\n",
              static_cast<unsigned long long>(fg.total_collectors), fg.collectors.size(), k,
              static_cast<long long>(rep.min_flow), below);
  std::printf("worst collector reads %s\n",
              format_positions(fg.collector_blocks[rep.worst_collector]).c_str());
  std::printf("edges=%zu closed_form=%llu\n", fg.edges.size(),
              static_cast<unsigned long long>(bounds::expected_edge_count(k, n, r, d)));
  std::printf("%s\n", rep.pass && rep.flows_feasible ? "pass" : "fail");
  return rep.pass && rep.flows_feasible ? kOk : kCheckFailed;
}

int cmd_mttdl(const reliability::ClusterParams& p, bool csv) {
  const auto rows = reliability::summary_table(p);
  std::fputs((csv ? reliability::format_csv(rows) : reliability::format_text(rows)).c_str(),
             stdout);
  return kOk;
}

int cmd_simulate(const std::string& config, const std::string& out) {
  const auto cfg = sim::load_config(config);
  const auto events = sim::simulate(cfg);
  if (out.empty()) {
    std::fputs(sim::trace_csv(events).c_str(), stdout);
    return kOk;
  }
  sim::export_trace(events, out);
  const auto t = sim::totals(events);
  std::printf("scheme=%s events=%zu blocks_lost=%zu blocks_read=%zu bytes_read=%llu "
              "data_loss_stripes=%zu",
              reliability::to_string(cfg.scheme), events.size(), t.blocks_lost, t.blocks_read,
              static_cast<unsigned long long>(t.bytes_read), t.data_loss_stripes);
  try {
    std::printf(" slope=%.4f", sim::fit_slope(events));
  } catch (const Error&) {
  }
  std::printf("\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally repairable stripe archives and storage-code checks"};
  app.require_subcommand(1);

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode a file into a stripe archive");
  encode->add_option("input", enc.input)->required();
  encode->add_option("archive", enc.output)->required();
  encode->add_option("--scheme", enc.scheme, "rs or lrc")->capture_default_str();
  encode->add_option("--k", enc.k)->capture_default_str();
  encode->add_option("--p", enc.p, "RS parities")->capture_default_str();
  encode->add_option("--r", enc.r, "data group size (lrc)")->capture_default_str();
  encode->add_option("--block-size", enc.block_size)->capture_default_str();
  encode->add_option("--field-bits", enc.m, "8 or 16")->capture_default_str();

  std::string arc, out;
  auto* decode = app.add_subcommand("decode", "Rebuild the original file (degraded read)");
  decode->add_option("archive", arc)->required();
  decode->add_option("output", out)->required();

  std::vector<std::size_t> blocks;
  std::optional<std::size_t> stripe;
  auto* corrupt = app.add_subcommand("corrupt", "Drop blocks from an archive");
  corrupt->add_option("archive", arc)->required();
  corrupt->add_option("--blocks", blocks)->required()->delimiter(',');
  corrupt->add_option("--stripe", stripe, "only this stripe (default: all)");

  auto* repair = app.add_subcommand("repair", "Rebuild missing blocks in place");
  repair->add_option("archive", arc)->required();

  auto* verify = app.add_subcommand("verify", "Re-derive parities and compare");
  verify->add_option("archive", arc)->required();

  std::size_t n = 0, k = 0, r = 0, d = 0;
  auto* bound = app.add_subcommand("bound", "Print n - ceil(k/r) - k + 2");
  bound->add_option("--n", n)->required();
  bound->add_option("--k", k)->required();
  bound->add_option("--r", r)->required();

  std::vector<std::size_t> spec;
  unsigned m = 16;
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  auto* distance = app.add_subcommand("distance", "Brute-force minimum distance");
  auto* dist_arc = distance->add_option("archive", arc);
  auto* dist_spec =
      distance->add_option("--random-spec", spec, "k,n,r of a random construction")
          ->delimiter(',');
  dist_arc->excludes(dist_spec);
  distance->add_option("--field-bits", m)->capture_default_str();
  distance->add_option("--trials", trials)->capture_default_str();
  distance->add_option("--seed", seed)->capture_default_str();

  std::size_t samples = 0;
  auto* flow = app.add_subcommand("flowcheck", "Max-flow to every data collector");
  flow->add_option("--n", n)->required();
  flow->add_option("--k", k)->required();
  flow->add_option("--r", r)->required();
  flow->add_option("--d", d)->required();
  flow->add_option("--samples", samples, "0 = every collector")->capture_default_str();
  flow->add_option("--seed", seed)->capture_default_str();

  reliability::ClusterParams cp;
  double mttf_years = 4;
  bool csv = false;
  auto* mttdl = app.add_subcommand("mttdl", "Markov MTTDL for rep3, RS(10,4), LRC(10,6,5)");
  mttdl->add_option("--nodes", cp.nodes)->capture_default_str();
  mttdl->add_option("--total-bytes", cp.total_bytes)->capture_default_str();
  mttdl->add_option("--block-bytes", cp.block_bytes)->capture_default_str();
  mttdl->add_option("--mttf-years", mttf_years, "per-node mean time to failure")
      ->capture_default_str();
  mttdl->add_option("--gamma-bps", cp.repair_bps, "repair bandwidth (bits/s)")
      ->capture_default_str();
  mttdl->add_flag("--csv", csv);

  std::string config;
  auto* simulate = app.add_subcommand("simulate", "Run the cluster repair simulator");
  simulate->add_option("--config", config)->required();
  simulate->add_option("--out", out, "write the trace here and print a summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (*encode) return cmd_encode(enc);
    if (*decode) return cmd_decode(arc, out);
    if (*corrupt) return cmd_corrupt(arc, blocks, stripe);
    if (*repair) return cmd_repair(arc);
    if (*verify) return cmd_verify(arc);
    if (*bound) return cmd_bound(n, k, r);
    if (*distance) {
      if (!spec.empty()) return cmd_distance_random(spec, m, trials, seed);
      if (arc.empty()) throw Error(ErrorKind::kInvalidArgument, "give an archive or --random-spec");
      return cmd_distance_archive(arc);
    }
    if (*flow) return cmd_flowcheck(n, k, r, d, samples, seed);
    if (*mttdl) {
      if (!(mttf_years > 0)) throw Error(ErrorKind::kInvalidArgument, "--mttf-years must be positive");
      cp.failure_rate = 1.0 / (mttf_years * reliability::kSecondsPerYear);
      return cmd_mttdl(cp, csv);
    }
    if (*simulate) return cmd_simulate(config, out);
  } catch (const Error& e) {
    std::fprintf(stderr, "locrep: %s\n", e.what());
    return exit_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "locrep: %s\n", e.what());
    return kCheckFailed;
  }
  return kInvalid;
}
