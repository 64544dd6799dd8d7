#include "confbb/pool.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace confbb {

ConflictPool::ConflictPool(int capacity, int age_limit)
    : capacity_(capacity), age_limit_(age_limit) {
  if (capacity_ < 1) throw std::invalid_argument("pool capacity must be >= 1");
  entries_.reserve(std::min(capacity_, 65536));
}

int ConflictPool::capacity_for(int num_vars, int num_rows) {
  long long c = 2ll * (num_vars + num_rows);
  return static_cast<int>(std::clamp(c, 1000ll, 50000ll));
}

int64_t ConflictPool::entry_id(const Entry& e) const {
  return std::visit([](const auto& c) { return c.id; }, e.item);
}

int ConflictPool::entry_age(const Entry& e) const {
  return std::visit([](const auto& c) { return c.age; }, e.item);
}

void ConflictPool::set_entry_age(Entry& e, int age) {
  std::visit([age](auto& c) { c.age = age; }, e.item);
}

const std::optional<Stamp>& ConflictPool::entry_stamp(const Entry& e) const {
  return std::visit(
      [](const auto& c) -> const std::optional<Stamp>& { return c.stamp; },
      e.item);
}

int ConflictPool::find(int64_t id) const {
  for (size_t i = 0; i < entries_.size(); ++i)
    if (entry_id(entries_[i]) == id) return static_cast<int>(i);
  return -1;
}

bool ConflictPool::contains(int64_t id) const { return find(id) >= 0; }

void ConflictPool::insert_entry(Entry e, std::vector<int64_t>* evicted) {
  if (static_cast<int>(entries_.size()) >= capacity_) {
    int victim = 0;
    for (size_t i = 1; i < entries_.size(); ++i) {
      int a = entry_age(entries_[i]), va = entry_age(entries_[victim]);
      if (a > va || (a == va && entries_[i].order < entries_[victim].order))
        victim = static_cast<int>(i);
    }
    if (evicted) evicted->push_back(entry_id(entries_[victim]));
    ++stats_.evicted;
    entries_.erase(entries_.begin() + victim);
  }
  e.order = next_order_++;
  entries_.push_back(std::move(e));
  ++stats_.inserted;
  view_dirty_ = true;
}

void ConflictPool::insert(ConflictConstraint c, std::vector<int64_t>* evicted) {
  c.age = 0;
  insert_entry(Entry{std::move(c), 0, false}, evicted);
}

void ConflictPool::insert(ProofConstraint p, std::vector<int64_t>* evicted) {
  p.age = 0;
  insert_entry(Entry{std::move(p), 0, false}, evicted);
}

int ConflictPool::record_propagation(int64_t id, bool deduced) {
  int i = find(id);
  if (i < 0)
    throw std::invalid_argument("pool has no constraint with id " +
                                std::to_string(id));
  Entry& e = entries_[i];
  int age = deduced ? 0 : entry_age(e) + 1;
  set_entry_age(e, age);
  if (age >= age_limit_) e.marked = true;
  return age;
}

std::vector<int64_t> ConflictPool::update_pass() {
  std::vector<int64_t> removed;
  int occupancy = size();
  for (const Entry& e : entries_)
    if (e.marked) ++stats_.age_deleted;

  int trim = 0;
  if (static_cast<int64_t>(occupancy) * 10 > static_cast<int64_t>(capacity_) * 9)
    trim = occupancy / 10;
  if (trim > 0) {
    // oldest-aged unmarked entries, oldest insertion first on ties
    std::vector<int> cand;
    for (size_t i = 0; i < entries_.size(); ++i)
      if (!entries_[i].marked) cand.push_back(static_cast<int>(i));
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
      int aa = entry_age(entries_[a]), ab = entry_age(entries_[b]);
      if (aa != ab) return aa > ab;
      return entries_[a].order < entries_[b].order;
    });
    if (static_cast<int>(cand.size()) > trim) cand.resize(trim);
    for (int i : cand) {
      entries_[i].marked = true;
      ++stats_.evicted;
    }
  }

  for (const Entry& e : entries_)
    if (e.marked) removed.push_back(entry_id(e));
  if (!removed.empty()) {
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                  [](const Entry& e) { return e.marked; }),
                   entries_.end());
    view_dirty_ = true;
  }
  return removed;
}

std::vector<int64_t> ConflictPool::on_new_incumbent(double z_new) {
  std::vector<int64_t> removed;
  auto too_far = [&](const Entry& e) {
    const std::optional<Stamp>& s = entry_stamp(e);
    if (!s) return false;
    double z_old = s->incumbent;
    double margin = z_old == 0.0 ? 0.05 : 0.05 * std::abs(z_old);
    return z_new <= z_old - margin;
  };
  for (const Entry& e : entries_)
    if (too_far(e)) removed.push_back(entry_id(e));
  if (!removed.empty()) {
    stats_.incumbent_deleted += static_cast<int64_t>(removed.size());
    entries_.erase(
        std::remove_if(entries_.begin(), entries_.end(), too_far),
        entries_.end());
    view_dirty_ = true;
  }
  return removed;
}

const std::vector<const ConflictConstraint*>& ConflictPool::conflicts() const {
  if (view_dirty_) {
    conflict_view_.clear();
    proof_view_.clear();
    for (const Entry& e : entries_) {
      if (const auto* c = std::get_if<ConflictConstraint>(&e.item))
        conflict_view_.push_back(c);
      else
        proof_view_.push_back(std::get_if<ProofConstraint>(&e.item));
    }
    view_dirty_ = false;
  }
  return conflict_view_;
}

const std::vector<const ProofConstraint*>& ConflictPool::proofs() const {
  conflicts();  // one rebuild fills both views
  return proof_view_;
}

}  // namespace confbb
