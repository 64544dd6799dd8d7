#include "confbb/generate.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

namespace confbb {
namespace {

// modulo draws keep the byte-identical guarantee independent of the standard
// library's distribution implementations
int draw(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

std::mt19937_64 seeded(uint32_t tag, int size, uint64_t seed) {
  std::seed_seq sq{tag, static_cast<uint32_t>(size),
                   static_cast<uint32_t>(seed),
                   static_cast<uint32_t>(seed >> 32)};
  return std::mt19937_64(sq);
}

MipModel binary_model(int n, const std::string& name) {
  MipModel m;
  m.name = name;
  m.objective.assign(n, 0.0);
  m.lb.assign(n, 0.0);
  m.ub.assign(n, 1.0);
  m.is_integer.assign(n, 1);
  m.var_names.reserve(n);
  for (int j = 0; j < n; ++j) m.var_names.push_back("x" + std::to_string(j));
  return m;
}

void add_row(MipModel& m, std::string name, std::vector<int> idx,
             std::vector<double> val, double lhs) {
  SparseRow r;
  r.name = std::move(name);
  r.index = std::move(idx);
  r.value = std::move(val);
  r.lhs = lhs;
  m.rows.push_back(std::move(r));
}

// weights in [10,99], target half their total; hitting the target exactly is
// a subset-sum problem, so subtrees go infeasible all the time
MipModel markshare_like(int n, uint64_t seed) {
  auto rng = seeded(0x4d41u, n, seed);
  MipModel m = binary_model(
      n, "markshare-like-" + std::to_string(n) + "-" + std::to_string(seed));
  std::vector<int> idx(n);
  std::vector<double> w(n);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    idx[j] = j;
    w[j] = draw(rng, 10, 99);
    total += w[j];
  }
  for (int j = 0; j < n; ++j) m.objective[j] = draw(rng, 0, 9);
  double target = std::floor(total / 2.0);
  add_row(m, "half_lo", idx, w, target);
  std::vector<double> neg(n);
  for (int j = 0; j < n; ++j) neg[j] = -w[j];
  add_row(m, "half_hi", std::move(idx), std::move(neg), -target);
  return m;
}

// two bins of capacity C with even item weights totalling exactly 2C, C odd:
// the relaxation packs tightly by splitting an item, while every integral
// assignment overloads one bin by at least one unit
MipModel bin_packing_infeasible(int items, uint64_t seed) {
  auto rng = seeded(0x4250u, items, seed);
  std::vector<int> u(items);
  int usum = 0;
  for (int i = 0; i < items; ++i) {
    u[i] = draw(rng, 2, 9);
    usum += u[i];
  }
  if (usum % 2 == 0) {
    usum += u[0] < 9 ? 1 : -1;
    u[0] += u[0] < 9 ? 1 : -1;
  }
  std::vector<double> w(items);
  double cap = 0.0;
  for (int i = 0; i < items; ++i) {
    w[i] = 2.0 * u[i];
    cap += u[i];
  }

  MipModel m = binary_model(2 * items, "bin-packing-infeasible-" +
                                           std::to_string(items) + "-" +
                                           std::to_string(seed));
  for (int i = 0; i < items; ++i) {
    m.var_names[2 * i] = "x" + std::to_string(i) + "a";
    m.var_names[2 * i + 1] = "x" + std::to_string(i) + "b";
  }
  for (int i = 0; i < items; ++i) {
    std::string tag = std::to_string(i);
    add_row(m, "as" + tag + "p", {2 * i, 2 * i + 1}, {1.0, 1.0}, 1.0);
    add_row(m, "as" + tag + "m", {2 * i, 2 * i + 1}, {-1.0, -1.0}, -1.0);
  }
  for (int b = 0; b < 2; ++b) {
    std::vector<int> idx(items);
    std::vector<double> val(items);
    for (int i = 0; i < items; ++i) {
      idx[i] = 2 * i + b;
      val[i] = -w[i];
    }
    add_row(m, b == 0 ? "capa" : "capb", std::move(idx), std::move(val), -cap);
  }
  return m;
}

MipModel random_setcover(int n, uint64_t seed) {
  auto rng = seeded(0x5343u, n, seed);
  MipModel m = binary_model(
      n, "random-setcover-" + std::to_string(n) + "-" + std::to_string(seed));
  for (int j = 0; j < n; ++j) m.objective[j] = draw(rng, 1, 9);
  for (int i = 0; i < n; ++i) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (draw(rng, 0, 9) < 3) idx.push_back(j);
    if (idx.empty()) idx.push_back(draw(rng, 0, n - 1));
    std::vector<double> val(idx.size(), 1.0);
    add_row(m, "cov" + std::to_string(i), std::move(idx), std::move(val), 1.0);
  }
  return m;
}

}  // namespace

std::optional<Family> family_from_string(std::string_view name) {
  if (name == "markshare-like") return Family::kMarkshareLike;
  if (name == "bin-packing-infeasible") return Family::kBinPackingInfeasible;
  if (name == "random-setcover") return Family::kRandomSetcover;
  return std::nullopt;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::kMarkshareLike:
      return "markshare-like";
    case Family::kBinPackingInfeasible:
      return "bin-packing-infeasible";
    case Family::kRandomSetcover:
      return "random-setcover";
  }
  return "?";
}

MipModel generate_instance(Family f, int size, uint64_t seed) {
  if (size < 3) throw std::invalid_argument("instance size must be >= 3");
  switch (f) {
    case Family::kMarkshareLike:
      return markshare_like(size, seed);
    case Family::kBinPackingInfeasible:
      return bin_packing_infeasible(size, seed);
    case Family::kRandomSetcover:
      return random_setcover(size, seed);
  }
  throw std::invalid_argument("unknown family");
}

}  // namespace confbb
