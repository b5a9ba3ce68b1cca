#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "pslforge/errors.hpp"
#include "pslforge/metrics.hpp"
#include "pslforge/sequence_io.hpp"

using namespace pslforge;

TEST(Sequence, RejectsShortOrNonFinite) {
  EXPECT_THROW(Sequence(Eigen::VectorXcd::Ones(1)), InvalidInput);
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(3);
  v[1] = cplx(std::nan(""), 0.0);
  EXPECT_THROW(Sequence{v}, InvalidInput);
  const std::vector<double> bad{0.0, INFINITY};
  EXPECT_THROW(sequence_from_phases(bad), InvalidInput);
}

TEST(Sequence, PhasesRoundTrip) {
  const std::vector<double> phases{0.0, 0.5, -1.25, 3.0};
  const Sequence x = sequence_from_phases(phases);
  EXPECT_TRUE(x.is_unimodular());
  const auto back = x.phases();
  for (std::size_t i = 0; i < phases.size(); ++i) EXPECT_NEAR(back[i], phases[i], 1e-15);
}

TEST(Sequence, ProjectionNormalizesAndRejectsZero) {
  Eigen::VectorXcd v(3);
  v << cplx(3, 4), cplx(0, -2), cplx(-0.5, 0);
  const Sequence p = project_to_unimodular(Sequence(v));
  EXPECT_TRUE(p.is_unimodular(1e-15));
  EXPECT_NEAR(std::arg(p[0]), std::atan2(4.0, 3.0), 1e-15);
  v[1] = 0.0;
  EXPECT_THROW(project_to_unimodular(Sequence(v)), DegenerateInput);
}

TEST(SequenceIo, RoundTripIsBitExact) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Sequence x = oracle::random_unimodular(5 + trial, rng);
    std::stringstream buf;
    write_sequence(buf, x);
    const Sequence y = read_sequence(buf);
    EXPECT_EQ(x, y);
    EXPECT_EQ(npsl_db(x), npsl_db(y));
  }
}

TEST(SequenceIo, HeaderAndColumns) {
  std::stringstream buf;
  write_sequence(buf, sequence_from_phases(std::vector<double>{0.0, 1.0}));
  std::string header, first;
  std::getline(buf, header);
  std::getline(buf, first);
  EXPECT_EQ(header, "# psl-forge sequence v1, N=2");
  EXPECT_EQ(first, "0,0,1,0");
}

TEST(SequenceIo, AcceptsPhaseOnlyAndReImOnly) {
  std::istringstream phase_only("# psl-forge sequence v1, N=3\n0,0\n1,1.5\n2,-2\n");
  const Sequence a = read_sequence(phase_only);
  EXPECT_NEAR(std::abs(a[1] - std::polar(1.0, 1.5)), 0.0, 1e-15);
  std::istringstream reim("# psl-forge sequence v1, N=2\n# comment\n0,,1,0\n\n1,,0,-1\n");
  const Sequence b = read_sequence(reim);
  EXPECT_EQ(b[1], cplx(0, -1));
}

TEST(SequenceIo, ChecksConsistencyAndReportsLine) {
  std::istringstream bad("# psl-forge sequence v1, N=2\n0,0,1,0\n1,0.5,1,0\n");
  try {
    read_sequence(bad, "seq.txt");
    FAIL() << "expected a consistency error";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("seq.txt:3"), std::string::npos) << e.what();
  }
  std::istringstream close("# psl-forge sequence v1, N=2\n0,0,1,0\n1,1e-10,1,0\n");
  EXPECT_NO_THROW(read_sequence(close));
}

TEST(SequenceIo, RejectsMalformedFiles) {
  for (const char* text : {"", "# wrong header\n0,0\n", "# psl-forge sequence v1, N=3\n0,0\n1,0\n",
                           "# psl-forge sequence v1, N=2\n0,0\n2,0\n", "# psl-forge sequence v1, N=2\n0,x\n1,0\n",
                           "# psl-forge sequence v1, N=2\n0,0,1\n1,0\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_sequence(in), InvalidInput) << text;
  }
}
