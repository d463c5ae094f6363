#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace tsgd {

// Fixed-capacity FIFO that overwrites its oldest element when full.
template <class T>
class RingBuffer {
 public:
  explicit RingBuffer(std::size_t capacity) : slots_(capacity) {}

  std::size_t capacity() const noexcept { return slots_.size(); }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  bool full() const noexcept { return size_ == slots_.size(); }

  void push(T value) {
    if (slots_.empty()) return;
    slots_[head_] = std::move(value);
    head_ = (head_ + 1) % slots_.size();
    if (size_ < slots_.size()) ++size_;
  }

  // age 0 is the newest element, age size()-1 the oldest.
  const T& newest(std::size_t age = 0) const {
    const std::size_t cap = slots_.size();
    return *slots_[(head_ + cap - 1 - age) % cap];
  }
  const T& oldest() const { return newest(size_ - 1); }

  void clear() noexcept {
    for (auto& s : slots_) s.reset();
    head_ = 0;
    size_ = 0;
  }

 private:
  std::vector<std::optional<T>> slots_;
  std::size_t head_ = 0;  // next write position
  std::size_t size_ = 0;
};

}  // namespace tsgd
