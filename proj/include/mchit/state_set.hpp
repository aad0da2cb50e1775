#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mchit {

// A subset of {0, ..., n-1}, kept as a sorted member list plus a membership mask.
// Ordering is lexicographic on the sorted member lists.
class StateSet {
 public:
  StateSet() = default;
  StateSet(std::size_t universe, std::vector<std::size_t> members);

  static StateSet all(std::size_t universe);
  static StateSet from_mask(std::size_t universe, std::uint64_t mask);

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  bool contains(std::size_t state) const { return state < universe_ && mask_[state]; }
  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::vector<std::size_t> complement() const;
  StateSet without(std::size_t state) const;
  std::string to_string() const;

  friend bool operator==(const StateSet& a, const StateSet& b) {
    return a.universe_ == b.universe_ && a.members_ == b.members_;
  }
  friend std::strong_ordering operator<=>(const StateSet& a, const StateSet& b) {
    return a.members_ <=> b.members_;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::size_t> members_;
  std::vector<bool> mask_;
};

}  // namespace mchit
