#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace cayley {

// A permutation of {0,...,n-1} stored as its image tuple: p[i] is the image
// of point i. All element labels in this library are 0-based in code; the
// file format and CLI speak 1-based labels.
using Perm = std::vector<std::uint32_t>;

inline Perm identity_perm(std::uint32_t n) {
  Perm p(n);
  std::iota(p.begin(), p.end(), 0u);
  return p;
}

inline bool is_permutation(const Perm& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

// compose(a, b): apply a first, then b, so compose(a,b)[i] == b[a[i]].
// Done as two placement passes (label-sort tableau): invert a by placement,
// then attach b along the sorted labels. Equivalent to the direct chase; the
// direct loop is kept in the test oracle as an independent route.
// The _into variant reuses caller scratch in hot loops; out must not alias
// the inputs.
inline void compose_into(const Perm& a, const Perm& b, Perm& inv_scratch,
                         Perm& out) {
  const std::size_t n = a.size();
  inv_scratch.resize(n);
  out.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) inv_scratch[a[i]] = i;
  for (std::uint32_t i = 0; i < n; ++i) out[inv_scratch[i]] = b[i];
}

inline Perm compose(const Perm& a, const Perm& b) {
  Perm inv, out;
  compose_into(a, b, inv, out);
  return out;
}

inline Perm inverse_perm(const Perm& a) {
  Perm inv(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i) inv[a[i]] = i;
  return inv;
}

}  // namespace cayley
