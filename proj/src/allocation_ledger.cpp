#include "sfhad/allocation_ledger.hpp"

#include <algorithm>
#include <utility>

namespace sfhad {

namespace {
thread_local AllocationLedger* active_ledger = nullptr;
}

void AllocationLedger::charge(std::size_t numbers) noexcept {
  live_ += numbers;
  peak_ = std::max(peak_, live_);
}

void AllocationLedger::credit(std::size_t numbers) noexcept {
  live_ -= std::min(numbers, live_);
}

AllocationLedger::Scope::Scope(AllocationLedger& ledger) noexcept
    : previous_(active_ledger) {
  active_ledger = &ledger;
}

AllocationLedger::Scope::~Scope() { active_ledger = previous_; }

AllocationLedger* AllocationLedger::active() noexcept { return active_ledger; }

LedgerCharge::LedgerCharge(std::size_t numbers) noexcept
    : ledger_(AllocationLedger::active()), numbers_(numbers) {
  if (ledger_ != nullptr) ledger_->charge(numbers_);
}

LedgerCharge::~LedgerCharge() { release(); }

LedgerCharge::LedgerCharge(const LedgerCharge& other) noexcept
    : LedgerCharge(other.numbers_) {}

LedgerCharge& LedgerCharge::operator=(const LedgerCharge& other) noexcept {
  if (this != &other) {
    release();
    ledger_ = AllocationLedger::active();
    numbers_ = other.numbers_;
    if (ledger_ != nullptr) ledger_->charge(numbers_);
  }
  return *this;
}

LedgerCharge::LedgerCharge(LedgerCharge&& other) noexcept
    : ledger_(std::exchange(other.ledger_, nullptr)),
      numbers_(std::exchange(other.numbers_, 0)) {}

LedgerCharge& LedgerCharge::operator=(LedgerCharge&& other) noexcept {
  if (this != &other) {
    release();
    ledger_ = std::exchange(other.ledger_, nullptr);
    numbers_ = std::exchange(other.numbers_, 0);
  }
  return *this;
}

void LedgerCharge::release() noexcept {
  if (ledger_ != nullptr) ledger_->credit(numbers_);
  ledger_ = nullptr;
  numbers_ = 0;
}

} // namespace sfhad
