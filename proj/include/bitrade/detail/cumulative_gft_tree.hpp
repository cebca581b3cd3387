// Copyright 2026 The bitrade Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "bitrade/rng.hpp"

namespace bitrade::detail {

// Treap keyed by candidate price that maintains, for every key x,
//   V(x) = sum of (b - s) over stored pairs with s <= x <= b
// and the smallest key attaining max V. Each pair (s, b) with s <= b adds
// +(b - s) at key s (counted from x = s on) and -(b - s) at key b (counted
// only for x > b). Inserting a pair costs O(log n) expected.
template <typename Scalar>
class CumulativeGftTree {
 public:
  void add_pair(const Scalar& s, const Scalar& b) {
    if (s <= b) {
      const Scalar surplus = b - s;
      root_ = insert(root_, s, surplus, Scalar(0));
      root_ = insert(root_, b, Scalar(0), surplus);
    } else {
      // No price trades, but both valuations remain candidates.
      root_ = insert(root_, s, Scalar(0), Scalar(0));
      root_ = insert(root_, b, Scalar(0), Scalar(0));
    }
  }

  bool empty() const { return root_ < 0; }
  std::size_t candidate_count() const { return nodes_.size(); }
  const Scalar& best_price() const { return nodes_[nodes_[root_].best_node].key; }
  const Scalar& best_value() const { return nodes_[root_].best; }

 private:
  struct Node {
    Scalar key;
    Scalar plus;   // surplus of pairs whose seller valuation equals key
    Scalar minus;  // surplus of pairs whose buyer valuation equals key
    Scalar total;  // sum of (plus - minus) over the subtree
    Scalar best;   // max over subtree keys of (prefix inside subtree + plus)
    std::size_t best_node = 0;
    std::uint64_t priority = 0;
    int left = -1, right = -1;
  };

  int insert(int t, const Scalar& key, const Scalar& plus, const Scalar& minus) {
    if (t < 0) {
      Node node{key, plus, minus, Scalar(0), Scalar(0)};
      node.priority = splitmix64(nodes_.size());
      nodes_.push_back(std::move(node));
      const int id = static_cast<int>(nodes_.size()) - 1;
      pull(id);
      return id;
    }
    if (key == nodes_[t].key) {
      nodes_[t].plus += plus;
      nodes_[t].minus += minus;
    } else if (key < nodes_[t].key) {
      const int child = insert(nodes_[t].left, key, plus, minus);
      nodes_[t].left = child;
      if (nodes_[child].priority > nodes_[t].priority) t = rotate_right(t);
    } else {
      const int child = insert(nodes_[t].right, key, plus, minus);
      nodes_[t].right = child;
      if (nodes_[child].priority > nodes_[t].priority) t = rotate_left(t);
    }
    pull(t);
    return t;
  }

  int rotate_right(int t) {
    const int l = nodes_[t].left;
    nodes_[t].left = nodes_[l].right;
    nodes_[l].right = t;
    pull(t);
    return l;
  }

  int rotate_left(int t) {
    const int r = nodes_[t].right;
    nodes_[t].right = nodes_[r].left;
    nodes_[r].left = t;
    pull(t);
    return r;
  }

  // Candidates are compared left, node, right so that ties keep the smaller key.
  void pull(int t) {
    Node& n = nodes_[t];
    Scalar prefix(0);
    bool have = false;
    if (n.left >= 0) {
      const Node& l = nodes_[n.left];
      prefix = l.total;
      n.best = l.best;
      n.best_node = l.best_node;
      have = true;
    }
    Scalar here = prefix + n.plus;
    if (!have || here > n.best) {
      n.best = here;
      n.best_node = static_cast<std::size_t>(t);
    }
    Scalar after = here - n.minus;
    if (n.right >= 0) {
      const Node& r = nodes_[n.right];
      Scalar right_best = after + r.best;
      if (right_best > n.best) {
        n.best = right_best;
        n.best_node = r.best_node;
      }
      after += r.total;
    }
    n.total = after;
  }

  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace bitrade::detail
