#pragma once

#include <algorithm>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

#include "sasaki/linalg.hpp"
#include "sasaki/types.hpp"

namespace sasaki {

// Multi-index over coordinate slots 0..k-1, kept sorted non-decreasing so
// permutation-symmetric derivatives share one entry.
using MultiIndex = std::vector<int>;

inline MultiIndex sorted(MultiIndex m) {
  std::sort(m.begin(), m.end());
  return m;
}

// Mixed Wirtinger derivatives K_{,alpha betabar} of a real-valued potential
// at one point, |alpha| + |beta| <= order. Only one of each conjugate pair
// (alpha,beta)/(beta,alpha) is stored; the mirror is produced by
// conjugation on lookup, so the symmetry entry(a,b) = conj(entry(b,a))
// holds exactly as stored.
class WirtingerJet {
 public:
  using Key = std::pair<MultiIndex, MultiIndex>;

  WirtingerJet() = default;
  WirtingerJet(int k, int order) : k_(k), order_(order) {}

  int k() const { return k_; }
  int order() const { return order_; }

  // true when (a,b) is the stored orientation of its conjugate pair
  static bool canonical(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return !(b < a);
  }

  void set(MultiIndex a, MultiIndex b, Cx v) {
    a = sorted(std::move(a));
    b = sorted(std::move(b));
    if (a == b) v.imag(0.0);  // self-conjugate entries are real
    if (canonical(a, b))
      entries_[{std::move(a), std::move(b)}] = v;
    else
      entries_[{std::move(b), std::move(a)}] = std::conj(v);
  }

  Cx entry(MultiIndex a, MultiIndex b) const {
    a = sorted(std::move(a));
    b = sorted(std::move(b));
    if (canonical(a, b)) {
      auto it = entries_.find({a, b});
      return it == entries_.end() ? Cx{} : it->second;
    }
    auto it = entries_.find({std::move(b), std::move(a)});
    return it == entries_.end() ? Cx{} : std::conj(it->second);
  }

  Cx d(std::initializer_list<int> a, std::initializer_list<int> b) const {
    return entry(MultiIndex(a), MultiIndex(b));
  }

  double value() const { return entry({}, {}).real(); }
  Cx d1(int m) const { return entry({m}, {}); }          // K_{,m}
  Cx d1bar(int m) const { return entry({}, {m}); }       // K_{,mbar}
  Cx mixed(int m, int n) const { return entry({m}, {n}); }  // K_{,m nbar}

  // complex Hessian H[a][b] = K_{,a bbar}
  CMat hessian() const {
    CMat h(k_, k_);
    for (int a = 0; a < k_; ++a)
      for (int b = 0; b < k_; ++b) h(a, b) = mixed(a, b);
    return h;
  }

  const std::map<Key, Cx>& entries() const { return entries_; }

  // All canonical keys with |a|+|b| <= order over k slots.
  static std::vector<Key> canonical_keys(int k, int order);

 private:
  int k_ = 0;
  int order_ = 0;
  std::map<Key, Cx> entries_;
};

inline std::vector<MultiIndex> all_multi_indices(int k, int len) {
  std::vector<MultiIndex> out;
  MultiIndex cur;
  // non-decreasing sequences of given length over 0..k-1
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(cur);
      return;
    }
    for (int v = start; v < k; ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline std::vector<WirtingerJet::Key> WirtingerJet::canonical_keys(int k,
                                                                   int order) {
  std::vector<Key> keys;
  for (int la = 0; la <= order; ++la)
    for (int lb = 0; lb + la <= order; ++lb)
      for (const auto& a : all_multi_indices(k, la))
        for (const auto& b : all_multi_indices(k, lb))
          if (canonical(a, b)) keys.push_back({a, b});
  return keys;
}

}  // namespace sasaki
