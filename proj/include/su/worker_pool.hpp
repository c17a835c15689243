#pragma once

#include <barrier>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace su {

/// Fixed set of threads that execute one task per run() call, fork-join
/// style. The calling thread participates as worker 0, and run() returns
/// only after every worker finished, so each call ends in a barrier.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t threads, bool pin = false);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t size() const { return size_; }

  /// Runs task(worker_id) on all workers. The first exception thrown by any
  /// worker is rethrown here.
  void run(const std::function<void(std::size_t)>& task);

 private:
  void worker_loop(std::size_t id);
  void invoke(std::size_t id);

  std::size_t size_;
  std::barrier<> start_;
  std::barrier<> done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  bool stop_ = false;
  std::mutex error_mutex_;
  std::exception_ptr error_;
  std::vector<std::thread> threads_;
};

/// Best-effort pinning of the calling thread to one CPU; false when the
/// platform refuses.
bool pin_current_thread(std::size_t cpu);

/// Physical cores when the platform reports them, otherwise hardware threads.
std::size_t physical_core_count();

}  // namespace su
