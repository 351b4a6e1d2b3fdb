#include "locrep/archive.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace locrep::archive {

namespace {

constexpr char kMagic[4] = {'L', 'R', 'C', 'X'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

template <typename T>
T get_le(const std::uint8_t* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(static_cast<T>(p[i]) << (8 * i));
  return v;
}

std::size_t bitmap_bytes(std::size_t n) { return (n + 7) / 8; }

// Returns an empty string when the parameters are usable.
std::string check_params(const Header& h) {
  if (h.m != 8 && h.m != 16) return "field m must be 8 or 16";
  if (h.k == 0) return "k must be positive";
  if (h.n <= h.k) return "n must exceed k";
  if (h.block_size == 0) return "block_size must be positive";
  if (h.m == 16 && h.block_size % 2 != 0) return "block_size must be even for m=16";
  if (h.r != 0) {
    if (h.r > h.k || h.k % h.r != 0) return "r must divide k";
    if (h.n <= h.k + h.k / h.r) return "n leaves no RS parities";
  }
  if (h.original_length > std::uint64_t{h.k} * h.block_size) {
    return "original_length exceeds stripe capacity";
  }
  return {};
}

const char* decoder_label(const StepReport& s) {
  if (s.decoder == lrc::Decoder::kHeavy) return "heavy";
  return s.via_implied_parity ? "light via implied parity" : "light";
}

Stripe full_stripe(std::vector<Block> blocks) {
  Stripe s;
  s.present.assign(blocks.size(), true);
  s.blocks = std::move(blocks);
  return s;
}

}  // namespace

const char* to_string(FormatIssue issue) {
  switch (issue) {
    case FormatIssue::kTruncatedHeader: return "truncated header";
    case FormatIssue::kBadMagic: return "bad magic";
    case FormatIssue::kBadVersion: return "unsupported version";
    case FormatIssue::kBadParameters: return "bad code parameters";
    case FormatIssue::kBadBitmap: return "bad presence bitmap";
    case FormatIssue::kTruncatedPayload: return "truncated payload";
    case FormatIssue::kInconsistentRecords: return "inconsistent records";
  }
  return "?";
}

FormatError::FormatError(FormatIssue issue, std::size_t offset, const std::string& detail)
    : Error(ErrorKind::kFormat, std::string(to_string(issue)) + " at offset " +
                                    std::to_string(offset) + (detail.empty() ? "" : ": " + detail)),
      issue_(issue),
      offset_(offset) {}

Header CodeSpec::header() const {
  Header h;
  h.m = static_cast<std::uint8_t>(m);
  if (k == 0 || k > 0xffff || block_size == 0 || block_size > 0xffffffffu) {
    throw Error(ErrorKind::kInvalidArgument, "k and block size must be positive and in range");
  }
  if (m != 8 && m != 16) throw Error(ErrorKind::kInvalidArgument, "field bits must be 8 or 16");
  if (p == 0) throw Error(ErrorKind::kInvalidArgument, "p must be positive");
  std::size_t n = k + p;
  if (lrc) {
    if (r == 0 || r > k || k % r != 0) {
      throw Error(ErrorKind::kInvalidArgument, "r must divide k");
    }
    n += k / r;
  }
  if (n > 0xffff) throw Error(ErrorKind::kInvalidArgument, "too many blocks per stripe");
  h.k = static_cast<std::uint16_t>(k);
  h.n = static_cast<std::uint16_t>(n);
  h.r = static_cast<std::uint16_t>(lrc ? r : 0);
  h.block_size = static_cast<std::uint32_t>(block_size);
  if (const auto why = check_params(h); !why.empty()) {
    throw Error(ErrorKind::kInvalidArgument, why);
  }
  // Building the code checks field-size limits.
  try {
    (void)Codec::from_header(h);
  } catch (const FormatError& e) {
    throw Error(ErrorKind::kInvalidArgument, e.what());
  }
  return h;
}

Codec Codec::from_header(const Header& h) {
  if (const auto why = check_params(h); !why.empty()) {
    throw FormatError(FormatIssue::kBadParameters, 0, why);
  }
  try {
    auto field = gf::Field::make(h.m);
    if (h.r == 0) return Codec(rs::RsCode::build(field, h.k, h.n), h.k, h.n);
    const std::size_t p = h.n - h.k - h.k / h.r;
    auto code = lrc::LrcCode::build(field, h.k, p, h.r);
    // The Vandermonde precode always aligns, so no extra parity is stored.
    if (code.stored_blocks() != h.n) {
      throw FormatError(FormatIssue::kBadParameters, 0, "n does not match the LRC layout");
    }
    return Codec(std::move(code), h.k, h.n);
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(FormatIssue::kBadParameters, 0, e.what());
  }
}

const gf::Field& Codec::field() const {
  return is_lrc() ? lrc().field() : rs().field();
}

const gf::Matrix& Codec::generator() const {
  return is_lrc() ? lrc().generator() : rs().generator();
}

std::vector<Block> Codec::encode(std::span<const Block> data) const {
  if (is_lrc()) return lrc().encode_blocks(data);
  std::vector<Block> out(data.begin(), data.end());
  auto par = rs().encode_parities(data);
  for (auto& b : par) out.push_back(std::move(b));
  return out;
}

std::vector<Block> Codec::read_data(const Stripe& s) const {
  bool all_data = s.present.size() >= k_;
  for (std::size_t i = 0; all_data && i < k_; ++i) all_data = s.present[i];
  if (all_data) return {s.blocks.begin(), s.blocks.begin() + static_cast<long>(k_)};
  std::vector<BlockShare> shares;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.present[i]) shares.push_back({i, s.blocks[i]});
  }
  if (shares.empty()) throw UnrecoverableError(s.missing(), "stripe has no blocks");
  return code::decode_blocks(field(), generator(), shares);
}

std::vector<std::uint8_t> serialize(const Record& rec) {
  const Header& h = rec.header;
  if (rec.stripe.blocks.size() != h.n || rec.stripe.present.size() != h.n) {
    throw Error(ErrorKind::kDimensionMismatch, "stripe does not match header n");
  }
  std::vector<std::uint8_t> out;
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  put_le(out, h.version);
  put_le(out, h.m);
  put_le(out, h.k);
  put_le(out, h.n);
  put_le(out, h.r);
  put_le(out, h.block_size);
  put_le(out, h.original_length);
  std::vector<std::uint8_t> bitmap(bitmap_bytes(h.n), 0);
  for (std::size_t i = 0; i < h.n; ++i) {
    if (rec.stripe.present[i]) bitmap[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  out.insert(out.end(), bitmap.begin(), bitmap.end());
  for (std::size_t i = 0; i < h.n; ++i) {
    if (!rec.stripe.present[i]) continue;
    const Block& b = rec.stripe.blocks[i];
    if (b.size() != h.block_size) {
      throw Error(ErrorKind::kDimensionMismatch, "block " + std::to_string(i) + " has " +
                                                     std::to_string(b.size()) + " bytes");
    }
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

std::vector<std::uint8_t> serialize(const std::vector<Record>& recs) {
  std::vector<std::uint8_t> out;
  for (const auto& r : recs) {
    auto one = serialize(r);
    out.insert(out.end(), one.begin(), one.end());
  }
  return out;
}

Record parse_record(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  const std::size_t start = offset;
  const std::size_t avail = bytes.size() - std::min(bytes.size(), start);
  // Magic first, so a short foreign file reads as bad magic when it can.
  const std::size_t magic_len = std::min<std::size_t>(avail, 4);
  if (std::memcmp(bytes.data() + start, kMagic, magic_len) != 0) {
    throw FormatError(FormatIssue::kBadMagic, start, "");
  }
  if (avail < kFixedHeaderBytes) {
    throw FormatError(FormatIssue::kTruncatedHeader, start,
                      std::to_string(avail) + " of " + std::to_string(kFixedHeaderBytes) +
                          " bytes");
  }
  const std::uint8_t* p = bytes.data() + start + 4;
  Record rec;
  Header& h = rec.header;
  h.version = p[0];
  h.m = p[1];
  h.k = get_le<std::uint16_t>(p + 2);
  h.n = get_le<std::uint16_t>(p + 4);
  h.r = get_le<std::uint16_t>(p + 6);
  h.block_size = get_le<std::uint32_t>(p + 8);
  h.original_length = get_le<std::uint64_t>(p + 12);
  if (h.version != kVersion) {
    throw FormatError(FormatIssue::kBadVersion, start, "version " + std::to_string(h.version));
  }
  if (const auto why = check_params(h); !why.empty()) {
    throw FormatError(FormatIssue::kBadParameters, start, why);
  }
  const std::size_t bm = bitmap_bytes(h.n);
  if (avail < kFixedHeaderBytes + bm) {
    throw FormatError(FormatIssue::kTruncatedHeader, start, "bitmap cut short");
  }
  const std::uint8_t* bits = bytes.data() + start + kFixedHeaderBytes;
  if (h.n % 8 != 0 && (bits[bm - 1] >> (h.n % 8)) != 0) {
    throw FormatError(FormatIssue::kBadBitmap, start, "padding bits set");
  }
  std::size_t present = 0;
  for (std::size_t i = 0; i < bm; ++i) present += static_cast<std::size_t>(std::popcount(bits[i]));
  const std::size_t need = kFixedHeaderBytes + bm + present * std::size_t{h.block_size};
  if (avail < need) {
    throw FormatError(FormatIssue::kTruncatedPayload, start,
                      std::to_string(present) + " blocks announced, " +
                          std::to_string(avail - kFixedHeaderBytes - bm) + " payload bytes");
  }
  rec.stripe.blocks.resize(h.n);
  rec.stripe.present.assign(h.n, false);
  const std::uint8_t* payload = bits + bm;
  for (std::size_t i = 0; i < h.n; ++i) {
    if (!((bits[i / 8] >> (i % 8)) & 1u)) continue;
    rec.stripe.present[i] = true;
    rec.stripe.blocks[i].assign(payload, payload + h.block_size);
    payload += h.block_size;
  }
  offset = start + need;
  return rec;
}

std::vector<Record> parse(std::span<const std::uint8_t> bytes) {
  if (bytes.empty()) throw FormatError(FormatIssue::kTruncatedHeader, 0, "empty archive");
  std::vector<Record> recs;
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t at = offset;
    recs.push_back(parse_record(bytes, offset));
    Header a = recs.front().header, b = recs.back().header;
    a.original_length = b.original_length = 0;
    if (!(a == b)) {
      throw FormatError(FormatIssue::kInconsistentRecords, at, "code parameters differ");
    }
  }
  return recs;
}

std::vector<Record> encode_file(std::span<const std::uint8_t> data, const CodeSpec& spec) {
  const Header base = spec.header();
  const Codec codec = Codec::from_header(base);
  const std::size_t cap = std::size_t{base.k} * base.block_size;
  const std::size_t stripes = std::max<std::size_t>(1, (data.size() + cap - 1) / cap);
  std::vector<Record> recs;
  recs.reserve(stripes);
  for (std::size_t s = 0; s < stripes; ++s) {
    const std::size_t begin = s * cap;
    const std::size_t len = std::min(cap, data.size() - std::min(data.size(), begin));
    std::vector<Block> blocks(base.k, Block(base.block_size, 0));
    for (std::size_t i = 0; i < base.k; ++i) {
      const std::size_t off = i * base.block_size;
      if (off >= len) break;
      const std::size_t take = std::min<std::size_t>(base.block_size, len - off);
      std::memcpy(blocks[i].data(), data.data() + begin + off, take);
    }
    Record rec;
    rec.header = base;
    rec.header.original_length = len;
    rec.stripe = full_stripe(codec.encode(blocks));
    recs.push_back(std::move(rec));
  }
  return recs;
}

std::vector<std::uint8_t> decode_file(const std::vector<Record>& recs) {
  std::vector<std::uint8_t> out;
  if (recs.empty()) return out;
  const Codec codec = Codec::from_header(recs.front().header);
  for (std::size_t s = 0; s < recs.size(); ++s) {
    const auto& rec = recs[s];
    std::vector<Block> data;
    try {
      data = codec.read_data(rec.stripe);
    } catch (const UnrecoverableError&) {
      throw UnrecoverableError(rec.stripe.missing(), "stripe " + std::to_string(s) + " unrecoverable");
    }
    std::size_t left = rec.header.original_length;
    for (const auto& b : data) {
      const std::size_t take = std::min(left, b.size());
      out.insert(out.end(), b.begin(), b.begin() + static_cast<long>(take));
      left -= take;
    }
  }
  return out;
}

void corrupt(std::vector<Record>& recs, std::span<const std::size_t> blocks,
             std::optional<std::size_t> stripe) {
  if (stripe && *stripe >= recs.size()) {
    throw Error(ErrorKind::kInvalidArgument, "stripe " + std::to_string(*stripe) +
                                                 " out of range (" +
                                                 std::to_string(recs.size()) + " stripes)");
  }
  for (std::size_t s = 0; s < recs.size(); ++s) {
    if (stripe && s != *stripe) continue;
    auto& st = recs[s].stripe;
    for (std::size_t b : blocks) {
      if (b >= st.size()) {
        throw Error(ErrorKind::kInvalidArgument, "block " + std::to_string(b) +
                                                     " out of range (n=" +
                                                     std::to_string(st.size()) + ")");
      }
      st.present[b] = false;
      st.blocks[b].clear();
    }
  }
}

std::string describe(const StepReport& step) {
  return std::string(decoder_label(step)) + ", " + std::to_string(step.blocks_read) +
         " blocks read";
}

std::vector<StripeRepair> repair(std::vector<Record>& recs) {
  std::vector<StripeRepair> out;
  if (recs.empty()) return out;
  const Codec codec = Codec::from_header(recs.front().header);
  for (std::size_t s = 0; s < recs.size(); ++s) {
    auto& rec = recs[s];
    StripeRepair rep;
    rep.stripe = s;
    rep.erased = rec.stripe.missing();
    if (rep.erased.empty()) {
      out.push_back(std::move(rep));
      continue;
    }
    try {
      if (codec.is_lrc()) {
        lrc::RepairPlan plan;
        rec.stripe = lrc::repair(codec.lrc(), rec.stripe, &plan);
        for (const auto& step : plan.steps) {
          rep.steps.push_back(
              {step.target, step.decoder, step.via_implied_parity, step.sources.size()});
        }
        rep.blocks_read = plan.blocks_read;
      } else {
        const auto full = codec.encode(codec.read_data(rec.stripe));
        for (std::size_t b : rep.erased) {
          rec.stripe.blocks[b] = full[b];
          rec.stripe.present[b] = true;
          rep.steps.push_back({b, lrc::Decoder::kHeavy, false, codec.k()});
          rep.blocks_read += codec.k();
        }
      }
    } catch (const UnrecoverableError&) {
      rep.recovered = false;
      rep.steps.clear();
      rep.blocks_read = 0;
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::vector<StripeCheck> verify(const std::vector<Record>& recs) {
  std::vector<StripeCheck> out;
  if (recs.empty()) return out;
  const Codec codec = Codec::from_header(recs.front().header);
  for (std::size_t s = 0; s < recs.size(); ++s) {
    const auto& st = recs[s].stripe;
    StripeCheck chk;
    chk.stripe = s;
    chk.missing = st.missing();
    try {
      const auto full = codec.encode(codec.read_data(st));
      for (std::size_t i = 0; i < st.size(); ++i) {
        if (st.present[i] && st.blocks[i] != full[i]) chk.mismatched.push_back(i);
      }
    } catch (const UnrecoverableError&) {
      chk.recoverable = false;
    }
    out.push_back(std::move(chk));
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), {});
  if (in.bad()) throw Error(ErrorKind::kIo, "read failed: " + path);
  return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::kIo, "cannot open " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorKind::kIo, "write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::kIo, "cannot replace " + path);
  }
}

}  // namespace locrep::archive
