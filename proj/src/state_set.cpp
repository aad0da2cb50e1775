#include "mchit/state_set.hpp"

#include <algorithm>

#include "mchit/error.hpp"

namespace mchit {

StateSet::StateSet(std::size_t universe, std::vector<std::size_t> members)
    : universe_(universe), members_(std::move(members)), mask_(universe, false) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (std::size_t m : members_) {
    if (m >= universe_) {
      throw Error(ErrorKind::BadSize, "state " + std::to_string(m) + " outside a " +
                                          std::to_string(universe_) + "-state space");
    }
    mask_[m] = true;
  }
}

StateSet StateSet::all(std::size_t universe) {
  std::vector<std::size_t> members(universe);
  for (std::size_t i = 0; i < universe; ++i) members[i] = i;
  return StateSet(universe, std::move(members));
}

StateSet StateSet::from_mask(std::size_t universe, std::uint64_t mask) {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < universe && i < 64; ++i) {
    if (mask & (std::uint64_t{1} << i)) members.push_back(i);
  }
  return StateSet(universe, std::move(members));
}

std::vector<std::size_t> StateSet::complement() const {
  std::vector<std::size_t> out;
  out.reserve(universe_ - members_.size());
  for (std::size_t i = 0; i < universe_; ++i) {
    if (!mask_[i]) out.push_back(i);
  }
  return out;
}

StateSet StateSet::without(std::size_t state) const {
  std::vector<std::size_t> members;
  members.reserve(members_.size());
  for (std::size_t m : members_) {
    if (m != state) members.push_back(m);
  }
  return StateSet(universe_, std::move(members));
}

std::string StateSet::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(members_[i]);
  }
  return out + "}";
}

}  // namespace mchit
