#pragma once

// Pass/fail records for relation sweeps. Every record carries a short
// label naming the relation it checks so reports can be read on their own.

#include <deque>
#include <string>
#include <type_traits>

namespace z2bos {

struct CheckRecord {
  std::string id;
  std::string anchor;
  bool pass = true;
  std::size_t instances = 0; // how many concrete cases were tested
  std::string detail;        // first counterexample, or a witness
};

class CheckLedger {
public:
  // references stay valid: records live in a deque
  CheckRecord& open(const std::string& id, const std::string& anchor) {
    records_.push_back({id, anchor, true, 0, {}});
    return records_.back();
  }

  // Counts one instance; the first failure's message is kept. `what` is
  // a string or a callable producing one (only called on failure).
  template <class Msg>
  static void tally(CheckRecord& r, bool ok, Msg&& what) {
    ++r.instances;
    if (ok || !r.pass) return;
    r.pass = false;
    if constexpr (std::is_invocable_v<Msg>) r.detail = what();
    else r.detail = what;
  }

  void merge(const CheckLedger& o) { records_.insert(records_.end(), o.records_.begin(), o.records_.end()); }

  bool all_pass() const {
    for (const auto& r : records_)
      if (!r.pass) return false;
    return true;
  }
  const CheckRecord* first_failure() const {
    for (const auto& r : records_)
      if (!r.pass) return &r;
    return nullptr;
  }
  const CheckRecord* find(const std::string& id) const {
    for (const auto& r : records_)
      if (r.id == id) return &r;
    return nullptr;
  }
  const std::deque<CheckRecord>& records() const { return records_; }

private:
  std::deque<CheckRecord> records_;
};

} // namespace z2bos
