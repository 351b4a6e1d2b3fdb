#include "locrep/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "locrep/error.hpp"
#include "locrep/rs.hpp"

namespace locrep::sim {

namespace {

constexpr std::size_t kDataPerStripe = 10;

const lrc::LrcCode& lrc_code() {
  static const auto code = lrc::LrcCode::build(gf::Field::make(8), 10, 4, 5);
  return code;
}

const rs::RsCode& rs_code() {
  static const auto code = rs::RsCode::build(gf::Field::make(8), 10, 14);
  return code;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view v, std::string_view key) {
  T out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "bad value '" + std::string(v) + "' for " + std::string(key));
  }
  return out;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Picks `count` distinct entries of `pool` by partial Fisher-Yates.
std::vector<std::size_t> draw(std::vector<std::size_t> pool, std::size_t count,
                              std::mt19937_64& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(count);
  return pool;
}

std::vector<Block> random_payload(std::mt19937_64& rng, std::size_t blocks, std::size_t len) {
  std::vector<Block> out(blocks, Block(len));
  for (auto& b : out)
    for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return out;
}

// Rebuilds `lost` payloads from the survivors and compares with the originals.
bool verify_rebuild(Scheme scheme, StripeState& s, const std::vector<std::size_t>& lost) {
  const auto original = s.payload;
  std::vector<bool> present(s.payload.size(), true);
  for (std::size_t p : lost) {
    present[p] = false;
    s.payload[p].assign(s.payload[p].size(), 0);
  }
  switch (scheme) {
    case Scheme::kRep3: {
      std::size_t src = 0;
      while (!present[src]) ++src;
      for (std::size_t p : lost) s.payload[p] = s.payload[src];
      break;
    }
    case Scheme::kRs: {
      std::vector<BlockShare> shares;
      for (std::size_t i = 0; i < s.payload.size(); ++i)
        if (present[i]) shares.push_back({i, s.payload[i]});
      const auto data = rs_code().decode_blocks(shares);
      auto all = data;
      const auto parities = rs_code().encode_parities(data);
      all.insert(all.end(), parities.begin(), parities.end());
      for (std::size_t p : lost) s.payload[p] = all[p];
      break;
    }
    case Scheme::kLrc: {
      Stripe stripe;
      stripe.blocks = s.payload;
      stripe.present = present;
      s.payload = lrc::repair(lrc_code(), stripe).blocks;
      break;
    }
  }
  return s.payload == original;
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::size_t line_no = 0;
  for (auto raw : split(text, '\n')) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kInvalidArgument,
                  "config line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "nodes") {
      cfg.nodes = parse_number<std::size_t>(value, key);
    } else if (key == "files") {
      cfg.files = parse_number<std::size_t>(value, key);
    } else if (key == "blocks_per_file") {
      cfg.blocks_per_file = parse_number<std::size_t>(value, key);
    } else if (key == "scheme") {
      if (value != "rep3" && value != "rs" && value != "lrc") {
        throw Error(ErrorKind::kInvalidArgument, "scheme must be rep3, rs or lrc");
      }
      cfg.scheme = reliability::parse_scheme(value);
    } else if (key == "block_size_bytes") {
      cfg.block_size_bytes = parse_number<std::uint64_t>(value, key);
    } else if (key == "gamma_bps") {
      cfg.gamma_bps = parse_number<double>(value, key);
    } else if (key == "seed") {
      cfg.seed = parse_number<std::uint64_t>(value, key);
    } else if (key == "schedule") {
      cfg.schedule.clear();
      if (!value.empty())
        for (auto item : split(value, ','))
          cfg.schedule.push_back(parse_number<std::size_t>(trim(item), key));
    } else if (key == "rs_read_mode") {
      if (value == "deployed") cfg.rs_read_mode = RsReadMode::kDeployed;
      else if (value == "efficient") cfg.rs_read_mode = RsReadMode::kEfficient;
      else throw Error(ErrorKind::kInvalidArgument, "rs_read_mode must be deployed or efficient");
    } else if (key == "verify") {
      if (value == "true" || value == "1") cfg.verify = true;
      else if (value == "false" || value == "0") cfg.verify = false;
      else throw Error(ErrorKind::kInvalidArgument, "verify must be true or false");
    } else {
      throw Error(ErrorKind::kInvalidArgument, "unknown config key '" + std::string(key) + "'");
    }
  }
  if (cfg.blocks_per_file == 0 || cfg.block_size_bytes == 0 || !(cfg.gamma_bps > 0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "blocks_per_file, block_size_bytes and gamma_bps must be positive");
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::size_t ClusterState::blocks_on(std::size_t node) const {
  std::size_t count = 0;
  for (const auto& s : stripes_) {
    if (s.data_lost) continue;
    count += static_cast<std::size_t>(
        std::count(s.node_of.begin(), s.node_of.end(), static_cast<long>(node)));
  }
  return count;
}

bool ClusterState::placement_valid() const {
  for (const auto& s : stripes_) {
    std::vector<long> hosts;
    for (long n : s.node_of)
      if (n >= 0) hosts.push_back(n);
    std::sort(hosts.begin(), hosts.end());
    if (std::adjacent_find(hosts.begin(), hosts.end()) != hosts.end()) return false;
  }
  return true;
}

ClusterState build_cluster(const SimConfig& cfg) {
  ClusterState c;
  c.cfg_ = cfg;
  c.width_ = reliability::stripe_width(cfg.scheme);
  if (cfg.nodes < c.width_) {
    throw Error(ErrorKind::kInvalidArgument, std::to_string(cfg.nodes) +
                                                 " nodes cannot hold stripes of width " +
                                                 std::to_string(c.width_));
  }
  c.nodes_.assign(cfg.nodes, Node{});
  c.place_rng_.seed(cfg.seed);
  c.kill_rng_.seed(cfg.seed ^ 0x6b696c6c6b696c6cull);
  std::mt19937_64 payload_rng(cfg.seed + 0x9e3779b97f4a7c15ull);

  const std::size_t per_file = cfg.scheme == Scheme::kRep3
                                   ? cfg.blocks_per_file
                                   : (cfg.blocks_per_file + kDataPerStripe - 1) / kDataPerStripe;
  std::vector<std::size_t> all(cfg.nodes);
  for (std::size_t i = 0; i < cfg.nodes; ++i) all[i] = i;
  for (std::size_t f = 0; f < cfg.files; ++f) {
    for (std::size_t s = 0; s < per_file; ++s) {
      StripeState st;
      st.file = f;
      for (std::size_t n : draw(all, c.width_, c.place_rng_)) st.node_of.push_back(static_cast<long>(n));
      if (cfg.verify) {
        const std::size_t len = cfg.verify_payload_bytes;
        switch (cfg.scheme) {
          case Scheme::kRep3: {
            const auto b = random_payload(payload_rng, 1, len).front();
            st.payload.assign(3, b);
            break;
          }
          case Scheme::kRs: {
            st.payload = random_payload(payload_rng, kDataPerStripe, len);
            const auto par = rs_code().encode_parities(st.payload);
            st.payload.insert(st.payload.end(), par.begin(), par.end());
            break;
          }
          case Scheme::kLrc:
            st.payload = lrc_code().encode_stripe(random_payload(payload_rng, kDataPerStripe, len)).blocks;
            break;
        }
      }
      c.stripes_.push_back(std::move(st));
    }
  }
  return c;
}

std::vector<EventMetrics> run_schedule(ClusterState& c, const std::vector<std::size_t>& kills) {
  const auto& cfg = c.cfg_;
  std::vector<EventMetrics> out;
  for (std::size_t kill : kills) {
    EventMetrics ev;
    ev.event_id = c.killed_.size();
    ev.nodes_killed = kill;

    std::vector<std::size_t> alive;
    for (std::size_t i = 0; i < c.nodes_.size(); ++i)
      if (c.nodes_[i].alive) alive.push_back(i);
    if (kill > alive.size()) {
      throw Error(ErrorKind::kInvalidArgument, "cannot kill " + std::to_string(kill) +
                                                   " of " + std::to_string(alive.size()) +
                                                   " live nodes");
    }
    auto victims = draw(alive, kill, c.kill_rng_);
    std::sort(victims.begin(), victims.end());
    for (std::size_t v : victims) c.nodes_[v].alive = false;
    c.killed_.push_back(victims);

    for (auto& s : c.stripes_) {
      if (s.data_lost) continue;
      std::vector<std::size_t> lost;
      for (std::size_t b = 0; b < s.node_of.size(); ++b) {
        const long host = s.node_of[b];
        if (host >= 0 && !c.nodes_[static_cast<std::size_t>(host)].alive) {
          ++ev.blocks_lost;
          s.node_of[b] = -1;
        }
        if (s.node_of[b] < 0) lost.push_back(b);
      }
      if (lost.empty()) continue;

      std::size_t reads = 0;
      bool recoverable = true;
      const std::size_t survivors = s.node_of.size() - lost.size();
      switch (cfg.scheme) {
        case Scheme::kRep3:
          recoverable = survivors > 0;
          reads = lost.size();
          break;
        case Scheme::kRs:
          recoverable = survivors >= kDataPerStripe;
          reads = lost.size() *
                  (cfg.rs_read_mode == RsReadMode::kDeployed ? survivors : kDataPerStripe);
          break;
        case Scheme::kLrc:
          try {
            reads = lrc::plan_repair(lrc_code(), lost).blocks_read;
          } catch (const UnrecoverableError&) {
            recoverable = false;
          }
          break;
      }
      if (!recoverable) {
        s.data_lost = true;
        ++ev.data_loss_stripes;
        continue;
      }
      ev.blocks_read += reads;
      if (!s.payload.empty()) {
        c.verified_ += lost.size();
        if (!verify_rebuild(cfg.scheme, s, lost)) ++c.mismatches_;
      }

      for (std::size_t b : lost) {
        std::vector<std::size_t> candidates;
        for (std::size_t n = 0; n < c.nodes_.size(); ++n) {
          if (!c.nodes_[n].alive) continue;
          if (std::find(s.node_of.begin(), s.node_of.end(), static_cast<long>(n)) != s.node_of.end())
            continue;
          candidates.push_back(n);
        }
        if (candidates.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        s.node_of[b] = static_cast<long>(candidates[pick(c.place_rng_)]);
      }
    }
    ev.bytes_read = ev.blocks_read * cfg.block_size_bytes;
    ev.network_bytes = 2 * ev.bytes_read;
    ev.repair_duration_s = static_cast<double>(ev.network_bytes) * 8.0 / cfg.gamma_bps;
    out.push_back(ev);
  }
  return out;
}

std::vector<EventMetrics> simulate(const SimConfig& cfg) {
  auto cluster = build_cluster(cfg);
  return run_schedule(cluster, cfg.schedule);
}

double fit_slope(const std::vector<EventMetrics>& events) {
  if (events.size() < 2) throw Error(ErrorKind::kInvalidArgument, "need at least two events");
  double mx = 0, my = 0;
  for (const auto& e : events) {
    mx += static_cast<double>(e.blocks_lost);
    my += static_cast<double>(e.blocks_read);
  }
  mx /= static_cast<double>(events.size());
  my /= static_cast<double>(events.size());
  double sxx = 0, sxy = 0;
  for (const auto& e : events) {
    const double dx = static_cast<double>(e.blocks_lost) - mx;
    sxx += dx * dx;
    sxy += dx * (static_cast<double>(e.blocks_read) - my);
  }
  if (sxx == 0) throw Error(ErrorKind::kInvalidArgument, "blocks_lost is constant across events");
  return sxy / sxx;
}

Totals totals(const std::vector<EventMetrics>& events) {
  Totals t;
  for (const auto& e : events) {
    t.blocks_lost += e.blocks_lost;
    t.blocks_read += e.blocks_read;
    t.bytes_read += e.bytes_read;
    t.repair_duration_s += e.repair_duration_s;
    t.data_loss_stripes += e.data_loss_stripes;
  }
  return t;
}

std::string trace_csv(const std::vector<EventMetrics>& events) {
  std::string out =
      "event_id,nodes_killed,blocks_lost,blocks_read,bytes_read,network_bytes,"
      "repair_duration_s,data_loss_stripes\n";
  char line[256];
  for (const auto& e : events) {
    std::snprintf(line, sizeof line, "%zu,%zu,%zu,%zu,%llu,%llu,%.17g,%zu\n", e.event_id,
                  e.nodes_killed, e.blocks_lost, e.blocks_read,
                  static_cast<unsigned long long>(e.bytes_read),
                  static_cast<unsigned long long>(e.network_bytes), e.repair_duration_s,
                  e.data_loss_stripes);
    out += line;
  }
  return out;
}

std::vector<EventMetrics> parse_trace(std::string_view csv) {
  std::vector<EventMetrics> out;
  bool header = true;
  for (auto raw : split(csv, '\n')) {
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.substr(0, 9) != "event_id,") throw Error(ErrorKind::kFormat, "missing trace header");
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw Error(ErrorKind::kFormat, "trace row needs 8 fields");
    EventMetrics e;
    e.event_id = parse_number<std::size_t>(f[0], "event_id");
    e.nodes_killed = parse_number<std::size_t>(f[1], "nodes_killed");
    e.blocks_lost = parse_number<std::size_t>(f[2], "blocks_lost");
    e.blocks_read = parse_number<std::size_t>(f[3], "blocks_read");
    e.bytes_read = parse_number<std::uint64_t>(f[4], "bytes_read");
    e.network_bytes = parse_number<std::uint64_t>(f[5], "network_bytes");
    e.repair_duration_s = parse_number<double>(f[6], "repair_duration_s");
    e.data_loss_stripes = parse_number<std::size_t>(f[7], "data_loss_stripes");
    out.push_back(e);
  }
  if (header) throw Error(ErrorKind::kFormat, "empty trace");
  return out;
}

void export_trace(const std::vector<EventMetrics>& events, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
  out << trace_csv(events);
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path);
}

}  // namespace locrep::sim
