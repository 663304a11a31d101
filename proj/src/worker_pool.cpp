#include "congra/worker_pool.hpp"

namespace congra {

WorkerPool::WorkerPool(unsigned workers) : workers_(workers == 0 ? 1 : workers) {
  if (workers_ < 2) return;
  threads_.reserve(workers_);
  for (unsigned i = 0; i < workers_; ++i) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    stopping_ = true;
  }
  work_cv_.notify_all();
  for (std::thread& t : threads_) t.join();
}

void WorkerPool::run_indexed(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads_.empty() || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  auto batch = std::make_shared<Batch>();
  batch->fn = &fn;
  batch->count = count;
  batch->remaining = count;

  std::unique_lock<std::mutex> lock(mutex_);
  current_ = batch;
  ++generation_;
  work_cv_.notify_all();
  done_cv_.wait(lock, [&] { return batch->remaining == 0; });
  if (current_ == batch) current_.reset();
  if (batch->first_error) std::rethrow_exception(batch->first_error);
}

void WorkerPool::worker_loop() {
  std::uint64_t seen_generation = 0;
  for (;;) {
    std::shared_ptr<Batch> batch;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      work_cv_.wait(lock, [&] {
        return stopping_ || (current_ != nullptr && generation_ != seen_generation);
      });
      if (stopping_) return;
      seen_generation = generation_;
      batch = current_;
    }
    for (;;) {
      const std::size_t i = batch->next.fetch_add(1, std::memory_order_relaxed);
      if (i >= batch->count) break;
      try {
        (*batch->fn)(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!batch->first_error) batch->first_error = std::current_exception();
      }
      std::lock_guard<std::mutex> lock(mutex_);
      if (--batch->remaining == 0) done_cv_.notify_all();
    }
  }
}

}  // namespace congra
