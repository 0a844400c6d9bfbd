#pragma once

#include <numeric>
#include <vector>

namespace bja {

// Disjoint-set forest with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  bool connected(int a, int b) { return find(a) == find(b); }

  // Dense component labels in order of first appearance.
  std::vector<int> component_labels() {
    std::vector<int> label(parent_.size(), -1);
    int next = 0;
    for (int i = 0; i < static_cast<int>(parent_.size()); ++i) {
      int root = find(i);
      if (label[root] < 0) label[root] = next++;
      label[i] = label[root];
    }
    return label;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace bja
