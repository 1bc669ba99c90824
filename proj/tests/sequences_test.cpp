#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "generators.hpp"
#include "mppc/errors.hpp"
#include "mppc/sequences.hpp"

namespace mppc {
namespace {

namespace fs = std::filesystem;

std::vector<std::uint64_t> as_vector(const SequenceData& s) {
  return {s.values().begin(), s.values().end()};
}

fs::path write_temp(const std::string& name, const std::string& contents) {
  const auto path = fs::temp_directory_path() / ("mppc_seq_" + name);
  std::ofstream(path, std::ios::binary) << contents;
  return path;
}

TEST(Generate, Examples) {
  EXPECT_EQ(as_vector(generate(Power{2}, 5)), (std::vector<std::uint64_t>{1, 4, 9, 16, 25}));
  EXPECT_EQ(as_vector(generate(Identity{}, 3)), (std::vector<std::uint64_t>{1, 2, 3}));
  EXPECT_EQ(as_vector(generate(FloorNLogA{1.0, 2}, 4)), (std::vector<std::uint64_t>{1, 3, 5, 8}));
}

TEST(Generate, FloorNLogAMatchesDirectEvaluation) {
  for (double A : {1.0, 1.5, 2.0}) {
    const auto start = default_floor_log_start(A);
    const auto seq = generate(FloorNLogA{A, start}, 5000);
    for (std::size_t i = 0; i < seq.size(); i += 37) {
      const double n = static_cast<double>(i + start);
      EXPECT_EQ(seq[i], static_cast<std::uint64_t>(std::floor(n * std::pow(std::log(n), A))));
    }
  }
}

TEST(Generate, PrefixProperty) {
  const std::vector<SequenceSpec> specs{Identity{}, Power{2}, Power{3}, FloorNLogA{1.0, 2},
                                        FloorNLogA{2.0, 3}};
  testing::Gen gen(21);
  for (const auto& spec : specs) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto n = static_cast<std::size_t>(gen.uniform(1, 3000));
      const auto longer = generate(spec, n + 1);
      const auto shorter = generate(spec, n);
      EXPECT_TRUE(std::equal(shorter.values().begin(), shorter.values().end(),
                             longer.values().begin()));
      EXPECT_EQ(as_vector(longer.prefix(n)), as_vector(shorter));
    }
  }
}

TEST(Generate, StrictlyIncreasing) {
  for (const SequenceSpec& spec :
       std::vector<SequenceSpec>{Power{5}, FloorNLogA{1.0, 2}, FloorNLogA{2.0, 3}}) {
    const auto seq = generate(spec, 6000);
    for (std::size_t i = 1; i < seq.size(); ++i) ASSERT_GE(seq[i] - seq[i - 1], 1u);
  }
}

TEST(Generate, DefaultStartSkipsZeroTerm) {
  EXPECT_EQ(default_floor_log_start(1.0), 2u);
  EXPECT_EQ(default_floor_log_start(1.8), 2u);
  EXPECT_EQ(default_floor_log_start(2.0), 3u);
  EXPECT_EQ(as_vector(generate(parse_sequence_spec("[n log^2 n]"), 3)),
            (std::vector<std::uint64_t>{3, 7, 12}));
  try {
    (void)generate(FloorNLogA{2.0, 2}, 3);
    FAIL() << "expected MonotonicityError";
  } catch (const MonotonicityError& e) {
    EXPECT_EQ(e.index(), 0u);
  }
}

TEST(Generate, RejectsInvalidInput) {
  EXPECT_THROW((void)generate(Identity{}, 0), std::invalid_argument);
  EXPECT_THROW((void)generate(FloorNLogA{0.5, 2}, 10), std::invalid_argument);
  EXPECT_THROW((void)generate(FloorNLogA{2.5, 2}, 10), std::invalid_argument);
  EXPECT_THROW((void)generate(FloorNLogA{1.0, 1}, 10), std::invalid_argument);
  EXPECT_THROW((void)generate(Power{1}, 10), std::invalid_argument);
}

TEST(Generate, OverflowIsReported) {
  // 2^21 cubed is 2^63, the largest allowed value; one more overflows.
  EXPECT_NO_THROW((void)generate(Power{3}, std::size_t{1} << 21));
  EXPECT_THROW((void)generate(Power{3}, (std::size_t{1} << 21) + 1), std::overflow_error);
}

TEST(SequenceData, ReportsFirstNonIncreasingIndex) {
  try {
    SequenceData data(Identity{}, {1, 3, 3, 4});
    FAIL() << "expected MonotonicityError";
  } catch (const MonotonicityError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  EXPECT_THROW(SequenceData(Identity{}, {0, 1}), std::invalid_argument);
}

TEST(ParseSequenceSpec, Grammar) {
  EXPECT_EQ(parse_sequence_spec("n"), SequenceSpec{Identity{}});
  EXPECT_EQ(parse_sequence_spec(" n^3 "), SequenceSpec{Power{3}});
  EXPECT_EQ(parse_sequence_spec("[n log n]"), SequenceSpec(FloorNLogA{1.0, 2}));
  EXPECT_EQ(parse_sequence_spec("[n log^2 n]"), SequenceSpec(FloorNLogA{2.0, 3}));
  EXPECT_EQ(parse_sequence_spec("[n log^2 n]@4"), SequenceSpec(FloorNLogA{2.0, 4}));
  EXPECT_EQ(parse_sequence_spec("[n log^1.5 n]@5"), SequenceSpec(FloorNLogA{1.5, 5}));
  EXPECT_EQ(parse_sequence_spec("file:/tmp/x.txt"), SequenceSpec(Explicit{"/tmp/x.txt"}));
  for (const char* bad : {"", "m", "n^", "n^x", "[n log n", "[n log^ n]", "file:"})
    EXPECT_THROW((void)parse_sequence_spec(bad), std::invalid_argument) << bad;
}

TEST(ParseSequenceSpec, RoundTripsThroughToString) {
  for (const char* text : {"n", "n^2", "[n log n]", "[n log^2 n]", "[n log^1.25 n]@7", "[n log^2 n]@2",
                           "file:data/seq.txt"}) {
    const auto spec = parse_sequence_spec(text);
    EXPECT_EQ(parse_sequence_spec(to_string(spec)), spec) << text;
  }
}

TEST(ParseFamily, SplitsOutsideBrackets) {
  const auto family = parse_family("n, [n log^2 n], n^2");
  ASSERT_EQ(family.size(), 3u);
  EXPECT_EQ(family[0], SequenceSpec{Identity{}});
  EXPECT_EQ(family[1], SequenceSpec(FloorNLogA{2.0, 3}));
  EXPECT_EQ(family[2], SequenceSpec{Power{2}});
  EXPECT_THROW((void)parse_family(""), std::invalid_argument);
}

TEST(ExplicitFile, ReadsStrictFormat) {
  const auto path = write_temp("ok.txt", "2\n3\n5\n7\n11");
  EXPECT_EQ(read_sequence_file(path), (std::vector<std::uint64_t>{2, 3, 5, 7, 11}));
  EXPECT_EQ(as_vector(generate(Explicit{path}, 3)), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_THROW((void)generate(Explicit{path}, 6), std::invalid_argument);
}

TEST(ExplicitFile, RejectsMalformedContent) {
  EXPECT_THROW((void)read_sequence_file(write_temp("blank.txt", "1\n\n2\n")),
               std::invalid_argument);
  EXPECT_THROW((void)read_sequence_file(write_temp("sign.txt", "1\n-2\n")),
               std::invalid_argument);
  EXPECT_THROW((void)read_sequence_file(write_temp("junk.txt", "1\n2x\n")),
               std::invalid_argument);
  EXPECT_THROW((void)generate(Explicit{write_temp("dec.txt", "1\n5\n4\n")}, 3),
               MonotonicityError);
}

TEST(ExplicitFile, MissingFileIsIoError) {
  EXPECT_THROW((void)read_sequence_file("/nonexistent/mppc/seq.txt"), IoError);
}

TEST(Orbit, Examples) {
  const std::vector<SequenceData> one{SequenceData(Identity{}, {1, 2})};
  auto pts = orbit(one, TorusPoint::from_reals({0.25}));
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[0][0].value(), 0.25);
  EXPECT_EQ(pts[1][0].value(), 0.5);

  const std::vector<SequenceData> two{SequenceData(Identity{}, {1}), SequenceData(Identity{}, {1})};
  const auto alpha = TorusPoint::from_reals({0.3, 0.7});
  pts = orbit(two, alpha);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0], alpha);

  const std::vector<SequenceData> wrap{SequenceData(Identity{}, {3})};
  EXPECT_EQ(orbit(wrap, TorusPoint::from_reals({0.75}))[0][0].value(), 0.25);
}

TEST(Orbit, CoordinatesAreExactProducts) {
  testing::Gen gen(22);
  const std::vector<SequenceData> seqs{generate(Power{2}, 1000), generate(FloorNLogA{2.0, 3}, 1000)};
  const auto alpha = gen.point(2);
  const auto pts = orbit(seqs, alpha);
  for (std::size_t n = 0; n < pts.size(); ++n)
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(pts[n][i], frac_mul(seqs[i][n], alpha[i]));
}

TEST(Orbit, MismatchThrows) {
  const std::vector<SequenceData> seqs{generate(Identity{}, 3), generate(Identity{}, 4)};
  EXPECT_THROW((void)orbit(seqs, TorusPoint::from_reals({0.1, 0.2})), std::invalid_argument);
  const std::vector<SequenceData> one{generate(Identity{}, 3)};
  EXPECT_THROW((void)orbit(one, TorusPoint::from_reals({0.1, 0.2})), std::invalid_argument);
}

}  // namespace
}  // namespace mppc
