#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace congra {

/// Fixed worker threads driving indexed batches. run_indexed blocks until
/// every index has been handled; with fewer than two workers it runs inline,
/// which is the deterministic mode the test suites use.
class WorkerPool {
 public:
  explicit WorkerPool(unsigned workers);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned worker_count() const { return workers_; }

  void run_indexed(std::size_t count, const std::function<void(std::size_t)>& fn);

 private:
  // One batch of indexed tasks. Heap-allocated and shared with the workers:
  // a worker that wakes late still holds a valid object, finds the index
  // counter exhausted and backs off without touching the caller's function.
  struct Batch {
    const std::function<void(std::size_t)>* fn = nullptr;
    std::size_t count = 0;
    std::atomic<std::size_t> next{0};
    std::size_t remaining = 0;          // guarded by the pool mutex
    std::exception_ptr first_error;     // guarded by the pool mutex
  };

  void worker_loop();

  unsigned workers_;
  std::vector<std::thread> threads_;
  std::mutex mutex_;
  std::condition_variable work_cv_;
  std::condition_variable done_cv_;
  std::shared_ptr<Batch> current_;
  std::uint64_t generation_ = 0;
  bool stopping_ = false;
};

}  // namespace congra
