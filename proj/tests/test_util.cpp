#include <doctest.h>

#include <set>

#include "codeprompt/util.hpp"
#include "support.hpp"

using namespace codeprompt;

TEST_CASE("sha256 matches FIPS 180-4 vectors") {
  CHECK(util::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(util::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(util::sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // Block boundary: 64 bytes of 'a'.
  CHECK(util::sha256_hex(std::string(64, 'a')) ==
        "ffe054fe7ae0cb6dc65c3af9b61d5209f439851db43d0ba5997337df154668eb");
}

TEST_CASE("counter rng is deterministic and stream-isolated") {
  util::CounterRng a(0, "demos/bgqa1");
  util::CounterRng b(0, "demos/bgqa1");
  for (int i = 0; i < 16; ++i) CHECK(a.next() == b.next());

  util::CounterRng c(0, "demos/condqa");
  util::CounterRng d(0, "demos/bgqa1");
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) all_equal = all_equal && (c.next() == d.next());
  CHECK_FALSE(all_equal);

  util::CounterRng e(1, "demos/bgqa1");
  util::CounterRng f(0, "demos/bgqa1");
  bool seed_equal = true;
  for (int i = 0; i < 16; ++i) seed_equal = seed_equal && (e.next() == f.next());
  CHECK_FALSE(seed_equal);
}

TEST_CASE("next_below stays in range and covers values") {
  util::CounterRng rng(7, "range");
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 500; ++i) {
    std::uint64_t v = rng.next_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK_THROWS_AS(rng.next_below(0), Error);
}

TEST_CASE("string helpers") {
  CHECK(util::split_lines("a\nb\r\nc") == std::vector<std::string>{"a", "b", "c"});
  CHECK(util::split_lines("").empty());
  CHECK(util::collapse_whitespace("  a \t b\n c ") == "a b c");
  CHECK(util::replace_all("a_b_c", "_", " ") == "a b c");
  CHECK(util::trim("  x\t") == "x");
  CHECK(util::canonical_double(0.5) == "0.5");
}

TEST_CASE("atomic writes replace content") {
  auto dir = testsupport::scratch_dir("util");
  auto path = dir / "f.txt";
  util::write_file_atomic(path, "one");
  util::write_file_atomic(path, "two");
  CHECK(util::read_file(path) == "two");
  CHECK_FALSE(util::read_file_if_exists(dir / "missing.txt").has_value());
}
