#pragma once

#include <numeric>
#include <vector>

namespace normsurf::detail {

class UnionFind {
 public:
  explicit UnionFind(int n = 0) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Links the roots so that the smaller index becomes the representative.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  int size() const { return static_cast<int>(parent_.size()); }

  /// Dense class ids numbered in order of each class's smallest element.
  std::vector<int> dense_classes(int* count = nullptr) {
    std::vector<int> id(parent_.size(), -1);
    std::vector<int> out(parent_.size());
    int next = 0;
    for (int i = 0; i < size(); ++i) {
      int r = find(i);
      if (id[r] < 0) id[r] = next++;
      out[i] = id[r];
    }
    if (count) *count = next;
    return out;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace normsurf::detail
