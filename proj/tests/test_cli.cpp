#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>

#include "doctest.h"
#include "locrep/archive.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LOCREP_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("locrep_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

void write_random(const std::string& path, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> v(n);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng());
  locrep::archive::write_file(path, v);
}

bool same_file(const std::string& a, const std::string& b) {
  return locrep::archive::read_file(a) == locrep::archive::read_file(b);
}

}  // namespace

TEST_CASE("encode, corrupt, repair, decode through the binary") {
  TempDir t;
  const std::size_t bs = 4096;
  for (std::size_t len : {std::size_t{0}, std::size_t{1}, bs - 1, bs, 10 * bs + 17}) {
    CAPTURE(len);
    write_random(t / "in", len, len);
    REQUIRE(run("encode " + t / "in" + " " + t / "a --scheme lrc --k 10 --p 4 --r 5 "
                "--block-size 4096").code == 0);
    REQUIRE(run("corrupt " + t / "a" + " --blocks 0,7,11,14").code == 0);
    const auto rep = run("repair " + t / "a");
    CHECK(rep.code == 0);
    CHECK(run("verify " + t / "a").code == 0);
    REQUIRE(run("decode " + t / "a" + " " + t / "out").code == 0);
    CHECK(same_file(t / "in", t / "out"));
  }
}

TEST_CASE("repair messages") {
  TempDir t;
  write_random(t / "in", 5000, 1);
  REQUIRE(run("encode " + t / "in" + " " + t / "a --block-size 512").code == 0);
  run("corrupt " + t / "a --blocks 2");
  CHECK(run("repair " + t / "a").out.find("light, 5 blocks read") != std::string::npos);
  run("corrupt " + t / "a --blocks 12");
  CHECK(run("repair " + t / "a").out.find("light via implied parity, 5 blocks read") !=
        std::string::npos);
  run("corrupt " + t / "a --blocks 0,1");
  const auto heavy = run("repair " + t / "a");
  CHECK(heavy.out.find("heavy, 10 blocks read") != std::string::npos);
  CHECK(heavy.out.find("stripe 0: 20 blocks read") != std::string::npos);
}

TEST_CASE("exit codes") {
  TempDir t;
  write_random(t / "in", 3000, 2);
  CHECK(run("encode " + t / "in" + " " + t / "a --block-size 100").code == 0);

  // Data blocks 0..4 plus their local parity 14 leave rank 9.
  CHECK(run("corrupt " + t / "a --blocks 0,1,2,3,4,14 --stripe 1").code == 0);
  const auto rep = run("repair " + t / "a");
  CHECK(rep.code == 2);
  CHECK(rep.out.find("stripe 1: unrecoverable, erased {0,1,2,3,4,14}") != std::string::npos);
  CHECK(run("decode " + t / "a " + t / "o").code == 2);
  CHECK(run("verify " + t / "a").code == 2);

  CHECK(run("decode " + t / "missing " + t / "o").code == 4);
  CHECK(run("encode " + t / "missing " + t / "b").code == 4);
  CHECK(run("encode " + t / "in /nonexistent-dir/x").code == 4);
  write_random(t / "junk", 100, 3);
  CHECK(run("decode " + t / "junk " + t / "o").code == 3);
  CHECK(run("encode " + t / "in " + t / "b --r 3").code == 3);
  CHECK(run("encode " + t / "in " + t / "b --scheme xor").code == 3);
  CHECK(run("corrupt " + t / "a --blocks 99").code == 3);
  CHECK(run("bogus").code == 3);
  CHECK(run("bound --n 16 --k 10 --r 0").code == 3);
  CHECK(run("--help").code == 0);
}

TEST_CASE("verify detects a flipped byte") {
  TempDir t;
  write_random(t / "in", 1000, 4);
  REQUIRE(run("encode " + t / "in " + t / "a --block-size 100").code == 0);
  auto bytes = locrep::archive::read_file(t / "a");
  bytes[26 + 12 * 100 + 5] ^= 0x40;  // inside block 12
  locrep::archive::write_file(t / "a", bytes);
  const auto v = run("verify " + t / "a");
  CHECK(v.code == 1);
  CHECK(v.out.find("mismatch at {12}") != std::string::npos);
}

TEST_CASE("bound, distance, flowcheck") {
  TempDir t;
  const auto b = run("bound --n 16 --k 10 --r 5");
  CHECK(b.code == 0);
  CHECK(b.out == "6\n");

  write_random(t / "in", 100, 5);
  REQUIRE(run("encode " + t / "in " + t / "a --block-size 16").code == 0);
  const auto d = run("distance " + t / "a");
  CHECK(d.code == 0);
  CHECK(d.out == "d=5 bound=6\n");

  const auto rnd = run("distance --random-spec 4,9,2 --seed 3");
  CHECK(rnd.code == 0);
  CHECK(rnd.out.find("d=5 bound=5") != std::string::npos);
  CHECK(run("distance --random-spec 4,9,2 --seed 3").out == rnd.out);
  CHECK(run("distance --random-spec 4,9,3").code == 3);

  const auto ok = run("flowcheck --n 9 --k 4 --r 2 --d 5");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("min_flow=4") != std::string::npos);
  const auto over = run("flowcheck --n 9 --k 4 --r 2 --d 6");
  CHECK(over.code == 1);
  CHECK(over.out.find("fail") != std::string::npos);
}

TEST_CASE("mttdl and simulate output") {
  const auto text = run("mttdl");
  CHECK(text.code == 0);
  CHECK(text.out.find("lrc_10_6_5") != std::string::npos);
  CHECK(text.out.find("expected blocks read per repaired block") != std::string::npos);
  const auto csv = run("mttdl --csv");
  CHECK(csv.out.rfind("scheme,overhead,traffic,mttdl_days\n", 0) == 0);
  CHECK(run("mttdl --mttf-years 0").code == 3);

  const auto a = run(std::string("simulate --config ") + LOCREP_SIM_CONFIG);
  const auto b = run(std::string("simulate --config ") + LOCREP_SIM_CONFIG);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("event_id,", 0) == 0);
  CHECK(run("simulate --config /nonexistent.cfg").code == 4);
}
