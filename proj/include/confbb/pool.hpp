#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "confbb/constraints.hpp"

namespace confbb {

// Fixed-capacity store for learned constraints of both kinds.  Every entry
// ages by one per propagation pass that deduced nothing and resets to zero
// when it fires; entries whose age hits the limit are marked and swept by
// the next update pass.  When the pool is full the stalest entry makes room.
class ConflictPool {
 public:
  explicit ConflictPool(int capacity, int age_limit = 20);

  // sized to the problem: twice (vars + rows), clamped to [1000, 50000]
  static int capacity_for(int num_vars, int num_rows);

  // the constraint arrives with a fresh caller-assigned id and age 0; when
  // the pool is full the entry with maximal age (ties: oldest insertion) is
  // evicted first and its id appended to `evicted`
  void insert(ConflictConstraint c, std::vector<int64_t>* evicted = nullptr);
  void insert(ProofConstraint p, std::vector<int64_t>* evicted = nullptr);

  // deduced resets the age, a dry pass increments it; reaching the age
  // limit marks the entry for the next update pass.  Throws on unknown id.
  int record_propagation(int64_t id, bool deduced);

  // sweep marked entries; above 90% occupancy additionally trim the
  // oldest-aged tenth.  Returns the removed ids.
  std::vector<int64_t> update_pass();

  // a strictly better incumbent deletes every entry whose stamp incumbent is
  // at least 5% worse than the new value (absolute margin at zero)
  std::vector<int64_t> on_new_incumbent(double z_new);

  int size() const { return static_cast<int>(entries_.size()); }
  int capacity() const { return capacity_; }
  int age_limit() const { return age_limit_; }
  bool contains(int64_t id) const;

  // stable views for the propagator, rebuilt after any mutation
  const std::vector<const ConflictConstraint*>& conflicts() const;
  const std::vector<const ProofConstraint*>& proofs() const;

  struct Stats {
    int64_t inserted = 0;
    int64_t evicted = 0;            // capacity pressure: insert + trim
    int64_t age_deleted = 0;        // swept after aging out
    int64_t incumbent_deleted = 0;  // stamp too far from the new incumbent
  };
  const Stats& stats() const { return stats_; }

 private:
  struct Entry {
    std::variant<ConflictConstraint, ProofConstraint> item;
    int64_t order = 0;  // insertion counter for tie-breaking
    bool marked = false;
  };

  int64_t entry_id(const Entry& e) const;
  int entry_age(const Entry& e) const;
  void set_entry_age(Entry& e, int age);
  const std::optional<Stamp>& entry_stamp(const Entry& e) const;
  void insert_entry(Entry e, std::vector<int64_t>* evicted);
  int find(int64_t id) const;
  void remove_at(std::vector<int> idx);  // descending order assumed

  std::vector<Entry> entries_;
  int capacity_;
  int age_limit_;
  int64_t next_order_ = 0;
  Stats stats_;
  mutable std::vector<const ConflictConstraint*> conflict_view_;
  mutable std::vector<const ProofConstraint*> proof_view_;
  mutable bool view_dirty_ = true;
};

}  // namespace confbb
