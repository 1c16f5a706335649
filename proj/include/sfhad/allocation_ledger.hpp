#pragma once

#include <cstddef>

namespace sfhad {

/// Counts how many scalar numbers (matrix entries, stored indices) are live
/// while a scope is active. Library containers charge the innermost active
/// ledger on the current thread when they allocate and credit it on release.
class AllocationLedger {
public:
  AllocationLedger() = default;
  AllocationLedger(const AllocationLedger&) = delete;
  AllocationLedger& operator=(const AllocationLedger&) = delete;

  std::size_t live() const noexcept { return live_; }
  std::size_t peak() const noexcept { return peak_; }
  void reset_peak() noexcept { peak_ = live_; }

  void charge(std::size_t numbers) noexcept;
  void credit(std::size_t numbers) noexcept;

  /// Installs a ledger as the active one for the current thread until the
  /// scope is destroyed. Scopes nest.
  class Scope {
  public:
    explicit Scope(AllocationLedger& ledger) noexcept;
    ~Scope();
    Scope(const Scope&) = delete;
    Scope& operator=(const Scope&) = delete;

  private:
    AllocationLedger* previous_;
  };

  static AllocationLedger* active() noexcept;

private:
  std::size_t live_ = 0;
  std::size_t peak_ = 0;
};

/// RAII charge held by a container. Copies charge again; moves transfer.
/// The charge is bound to the ledger active at construction time.
class LedgerCharge {
public:
  LedgerCharge() noexcept = default;
  explicit LedgerCharge(std::size_t numbers) noexcept;
  ~LedgerCharge();

  LedgerCharge(const LedgerCharge& other) noexcept;
  LedgerCharge& operator=(const LedgerCharge& other) noexcept;
  LedgerCharge(LedgerCharge&& other) noexcept;
  LedgerCharge& operator=(LedgerCharge&& other) noexcept;

  std::size_t numbers() const noexcept { return numbers_; }

private:
  void release() noexcept;

  AllocationLedger* ledger_ = nullptr;
  std::size_t numbers_ = 0;
};

} // namespace sfhad
