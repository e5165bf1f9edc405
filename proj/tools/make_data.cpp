// Writes the bundled Kraus files into the directory given as argv[1].

#include <fstream>
#include <iostream>

#include "fcs/kraus_io.hpp"
#include "fcs/witness.hpp"

namespace {

// Adding +0 turns negative zeros into plain zeros.
fcs::Mat unsigned_zeros(const fcs::Mat& m) { return m + fcs::Mat::Zero(m.rows(), m.cols()); }

void write(const std::string& dir, const std::string& file, fcs::KrausFile f) {
  for (auto& v : f.kraus.v) v = unsigned_zeros(v);
  if (f.rho) f.rho = unsigned_zeros(*f.rho);
  std::ofstream out(dir + "/" + file);
  out << "# " << file << "\n" << fcs::write_kraus(f);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_data <dir>\n";
    return 2;
  }
  using namespace fcs;
  const std::string dir = argv[1];
  Rng rng(20260101);

  write(dir, "aklt.kraus", {"aklt", "real", witness::aklt(), Mat(0.5 * Mat::Identity(2, 2))});
  write(dir, "random_unital.kraus", {"random_unital", "haar", witness::random_unital(rng, 3, 2), {}});
  Vec xi = Vec::Zero(3);
  xi(1) = 1.0;
  write(dir, "product.kraus", {"product", "m=0", witness::product_state(xi), {}});

  // d = 2 candidates
  Vec up = Vec::Zero(2);
  up(0) = 1.0;
  write(dir, "d2_product.kraus", {"d2_product", "up", witness::product_state(up), {}});
  Vec tilted(2);
  tilted << 1.0, kI;
  write(dir, "d2_product_complex.kraus",
        {"d2_product_complex", "(1,i)/sqrt2", witness::product_state(tilted), {}});
  const SpinRep half = build_spin_rep(2);
  std::optional<KrausFamily> dimer;
  while (!dimer) dimer = witness::random_su2_covariant(rng, half, {1, 2});
  write(dir, "d2_dimer.kraus", {"d2_dimer", "K = spin 0 + spin 1/2", *dimer, {}});
  write(dir, "d2_random.kraus", {"d2_random", "haar", witness::random_unital(rng, 2, 2), {}});
  return 0;
}
