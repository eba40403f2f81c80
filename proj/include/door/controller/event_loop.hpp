#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <mutex>
#include <thread>
#include <type_traits>

#include "door/controller/controller.hpp"

namespace door::controller {

// The one thread that touches the controller in live mode. Commands from the
// admin API and the doorbell are queued here in arrival order; between
// commands the loop ticks the relock timer.
class EventLoop {
 public:
  explicit EventLoop(Controller& controller, std::chrono::milliseconds tick_interval = std::chrono::milliseconds(10));
  ~EventLoop();

  EventLoop(const EventLoop&) = delete;
  EventLoop& operator=(const EventLoop&) = delete;

  void start();
  // Drains queued commands, then stops the thread.
  void stop();

  template <typename Fn>
  auto submit(Fn&& fn) -> std::future<std::invoke_result_t<Fn&, Controller&>> {
    using Result = std::invoke_result_t<Fn&, Controller&>;
    auto task = std::make_shared<std::packaged_task<Result()>>(
        [this, fn = std::forward<Fn>(fn)]() mutable { return fn(controller_); });
    auto future = task->get_future();
    enqueue([task] { (*task)(); });
    return future;
  }

 private:
  void enqueue(std::function<void()> job);
  void run();

  Controller& controller_;
  std::chrono::milliseconds tick_interval_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::deque<std::function<void()>> jobs_;
  bool stopping_ = false;
  std::thread thread_;
};

}  // namespace door::controller
