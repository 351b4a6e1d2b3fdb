#pragma once

// On-disk stripe container. One record per stripe, concatenated:
//
//   "LRCX" | version u8 | m u8 | k u16 | n u16 | r u16 | block_size u32 |
//   original_length u64 | presence bitmap ceil(n/8) | present blocks
//
// Integers are little-endian. Bitmap bit i (LSB first within a byte) marks
// block i present; padding bits must be zero. r == 0 means plain RS(k, n-k).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "locrep/error.hpp"
#include "locrep/lrc.hpp"
#include "locrep/rs.hpp"

namespace locrep::archive {

inline constexpr std::uint8_t kVersion = 1;
inline constexpr std::size_t kFixedHeaderBytes = 4 + 1 + 1 + 2 + 2 + 2 + 4 + 8;

enum class FormatIssue {
  kTruncatedHeader,
  kBadMagic,
  kBadVersion,
  kBadParameters,
  kBadBitmap,
  kTruncatedPayload,
  kInconsistentRecords,
};

const char* to_string(FormatIssue issue);

class FormatError : public Error {
 public:
  FormatError(FormatIssue issue, std::size_t offset, const std::string& detail);

  FormatIssue issue() const noexcept { return issue_; }
  // Byte offset of the record that failed to parse.
  std::size_t offset() const noexcept { return offset_; }

 private:
  FormatIssue issue_;
  std::size_t offset_;
};

struct Header {
  std::uint8_t version = kVersion;
  std::uint8_t m = 8;
  std::uint16_t k = 0;
  std::uint16_t n = 0;
  std::uint16_t r = 0;
  std::uint32_t block_size = 0;
  // Payload bytes of the file carried by this stripe.
  std::uint64_t original_length = 0;

  bool operator==(const Header&) const = default;
};

// Parameters given on the encode command line. For lrc, n is k + p + k/r.
struct CodeSpec {
  bool lrc = true;
  std::size_t k = 10;
  std::size_t p = 4;
  std::size_t r = 5;
  unsigned m = 8;
  std::size_t block_size = 64 * 1024;

  // Throws Error(kInvalidArgument) on unusable parameters.
  Header header() const;
};

// The code a header describes, RS or LRC.
class Codec {
 public:
  // Throws FormatError(kBadParameters) if the header names no valid code.
  static Codec from_header(const Header& h);

  bool is_lrc() const noexcept { return std::holds_alternative<lrc::LrcCode>(code_); }
  const lrc::LrcCode& lrc() const { return std::get<lrc::LrcCode>(code_); }
  const rs::RsCode& rs() const { return std::get<rs::RsCode>(code_); }
  const gf::Field& field() const;
  const gf::Matrix& generator() const;
  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return n_; }

  std::vector<Block> encode(std::span<const Block> data) const;
  // Recovers the k data blocks from whatever is present (degraded read).
  // Throws UnrecoverableError.
  std::vector<Block> read_data(const Stripe& s) const;

 private:
  explicit Codec(std::variant<lrc::LrcCode, rs::RsCode> code, std::size_t k, std::size_t n)
      : code_(std::move(code)), k_(k), n_(n) {}

  std::variant<lrc::LrcCode, rs::RsCode> code_;
  std::size_t k_;
  std::size_t n_;
};

struct Record {
  Header header;
  Stripe stripe;  // blocks of absent positions are empty
};

std::vector<std::uint8_t> serialize(const Record& rec);
std::vector<std::uint8_t> serialize(const std::vector<Record>& recs);

// Parses one record at `offset`, advancing it. Throws FormatError.
Record parse_record(std::span<const std::uint8_t> bytes, std::size_t& offset);
// Parses a whole archive. An empty buffer is a truncated header. All
// records must share m, k, n, r and block_size.
std::vector<Record> parse(std::span<const std::uint8_t> bytes);

// Splits `data` into ceil(len / (k*block_size)) stripes (at least one), zero-
// padding the last.
std::vector<Record> encode_file(std::span<const std::uint8_t> data, const CodeSpec& spec);
// Degraded read of every stripe, truncated to each original_length.
std::vector<std::uint8_t> decode_file(const std::vector<Record>& recs);

// Clears presence of `blocks` in the selected stripes (all if none given).
// Throws Error(kInvalidArgument) for an out-of-range block or stripe.
void corrupt(std::vector<Record>& recs, std::span<const std::size_t> blocks,
             std::optional<std::size_t> stripe = std::nullopt);

struct StepReport {
  std::size_t block = 0;
  lrc::Decoder decoder = lrc::Decoder::kLight;
  bool via_implied_parity = false;
  std::size_t blocks_read = 0;
};

struct StripeRepair {
  std::size_t stripe = 0;
  std::vector<std::size_t> erased;
  bool recovered = true;
  std::vector<StepReport> steps;
  std::size_t blocks_read = 0;
};

// "light, 5 blocks read", "light via implied parity, 5 blocks read",
// "heavy, 10 blocks read".
std::string describe(const StepReport& step);

// Rebuilds every missing block. Unrecoverable stripes are left untouched and
// reported with recovered == false. RS repairs are heavy, reading k blocks.
std::vector<StripeRepair> repair(std::vector<Record>& recs);

struct StripeCheck {
  std::size_t stripe = 0;
  std::vector<std::size_t> missing;
  std::vector<std::size_t> mismatched;
  bool recoverable = true;
  bool ok() const noexcept { return recoverable && mismatched.empty(); }
};

// Re-derives the codeword from the data (degraded if needed) and compares
// every present block.
std::vector<StripeCheck> verify(const std::vector<Record>& recs);

std::vector<std::uint8_t> read_file(const std::string& path);   // Error(kIo)
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace locrep::archive
