#include "mchit/config.hpp"

namespace mchit {
namespace {
Tolerances& mutable_tolerances() {
  static Tolerances instance;
  return instance;
}
}  // namespace

const Tolerances& tolerances() { return mutable_tolerances(); }

void set_tolerances(const Tolerances& t) { mutable_tolerances() = t; }

}  // namespace mchit
