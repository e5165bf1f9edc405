#include <gtest/gtest.h>

#include "fcs/kraus_io.hpp"
#include "fcs/witness.hpp"

using namespace fcs;

namespace {

int error_line(const std::string& text) {
  try {
    read_kraus_string(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(KrausIo, RoundTripIsBitExact) {
  Rng rng(137);
  for (int t = 0; t < 20; ++t) {
    KrausFile f{"r" + std::to_string(t), "haar", witness::random_unital(rng, 3, 3), {}};
    if (t % 2) f.rho = fixed_point(f.kraus).rho;
    const KrausFile back = read_kraus_string(write_kraus(f));
    EXPECT_EQ(back.name, f.name);
    EXPECT_EQ(back.gauge, f.gauge);
    for (int i = 0; i < 3; ++i) EXPECT_TRUE((back.kraus.v[i].array() == f.kraus.v[i].array()).all());
    ASSERT_EQ(back.rho.has_value(), f.rho.has_value());
    if (f.rho) EXPECT_TRUE((back.rho->array() == f.rho->array()).all());
    EXPECT_EQ(write_kraus(back), write_kraus(f));
  }
}

TEST(KrausIo, CommentsAndBlankLines) {
  const std::string text =
      "# header\n\nname: one  # trailing\nd: 1\nk: 1\nkraus 1\n  (1, 0)\n";
  const KrausFile f = read_kraus_string(text);
  EXPECT_EQ(f.name, "one");
  EXPECT_EQ(f.kraus.v[0](0, 0), cplx(1.0, 0.0));
}

TEST(KrausIo, DiagnosticsNameTheLine) {
  EXPECT_EQ(error_line("d: 1\nk: 1\nkraus 1\n(1, 0\n"), 4);
  EXPECT_EQ(error_line("d: 1\nk: 1\nkraus 1\n(1, x)\n"), 4);
  EXPECT_EQ(error_line("d: 1\nk: 2\nkraus 1\n(1, 0)\n"), 4);
  EXPECT_EQ(error_line("d: 1\nk: 1\nkraus 2\n(1, 0)\n"), 3);
  EXPECT_EQ(error_line("d: 1\nk: 1\ncolour: red\n"), 3);
  EXPECT_EQ(error_line("(1, 0)\n"), 1);
  EXPECT_EQ(error_line("k: 1\nkraus 1\n(1, 0)\n"), 2);
  EXPECT_EQ(error_line("d: 2\nk: 1\nkraus 1\n(1, 0)\n"), 1);
  EXPECT_EQ(error_line("d: 1\nk: 1\nkraus 1\n(2, 0)\n"), 1);
  EXPECT_EQ(error_line("d: 1\nk: 1\nkraus 1\n(1, 0)\n(0, 0)\n"), 5);
}

TEST(KrausIo, StoredRhoIsUsed) {
  KrausFile f{"aklt", "real", witness::aklt(), Mat(0.5 * Mat::Identity(2, 2))};
  const FcsState st = state_from_file(read_kraus_string(write_kraus(f)));
  EXPECT_EQ(st.rho, f.rho.value());
  f.rho = Mat(Mat::Identity(2, 2));
  EXPECT_THROW(state_from_file(read_kraus_string(write_kraus(f))), InvalidArgument);
}

TEST(KrausIo, BundledFilesParse) {
  for (const char* name : {"aklt", "random_unital", "product", "d2_product", "d2_product_complex",
                           "d2_dimer", "d2_random"}) {
    const KrausFile f = read_kraus_file(std::string(FCS_DATA_DIR) + "/" + name + ".kraus");
    EXPECT_EQ(f.name, name);
    EXPECT_TRUE(validate(f.kraus, 1e-12).pass);
  }
  EXPECT_THROW(read_kraus_file("/nonexistent/file.kraus"), InvalidArgument);
}
