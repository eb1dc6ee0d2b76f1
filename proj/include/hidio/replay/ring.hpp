#pragma once

#include <cstddef>
#include <vector>

#include "hidio/errors.hpp"

namespace hidio::replay {

/// Fixed-capacity FIFO ring. Index 0 is the oldest stored item.
template <typename T>
class Ring {
 public:
  Ring() = default;
  explicit Ring(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw ConfigError("replay capacity must be >= 1");
    items_.reserve(capacity_ < 4096 ? capacity_ : 4096);
  }

  void push(T item) {
    if (items_.size() < capacity_) {
      items_.push_back(std::move(item));
    } else {
      items_[cursor_] = std::move(item);
      cursor_ = (cursor_ + 1) % capacity_;
    }
    ++pushed_;
  }

  const T& at(std::size_t i) const {
    if (i >= items_.size()) throw UsageError("replay index out of range");
    return items_[(cursor_ + i) % items_.size()];
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t total_pushed() const { return pushed_; }

  // Replaces the contents with `ordered` (oldest first), as read back from a snapshot.
  void assign(std::vector<T> ordered, std::size_t pushed) {
    if (ordered.size() > capacity_) throw ConfigError("replay snapshot exceeds capacity");
    items_ = std::move(ordered);
    cursor_ = 0;
    pushed_ = pushed;
  }

  void clear() {
    items_.clear();
    cursor_ = 0;
    pushed_ = 0;
  }

 private:
  std::size_t capacity_ = 1;
  std::size_t cursor_ = 0;  // slot of the oldest item once full
  std::size_t pushed_ = 0;
  std::vector<T> items_;
};

}  // namespace hidio::replay
