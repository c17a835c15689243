#pragma once

#include <atomic>

namespace su {

// Word-sized relaxed accesses to state that racy (Hogwild-style) execution
// shares between threads. On x86-64 these are plain loads and stores.

template <class T>
inline T load_relaxed(const T& slot) {
  return std::atomic_ref<T>(const_cast<T&>(slot)).load(std::memory_order_relaxed);
}

template <class T>
inline void store_relaxed(T& slot, T value) {
  std::atomic_ref<T>(slot).store(value, std::memory_order_relaxed);
}

}  // namespace su
