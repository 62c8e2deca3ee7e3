#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "taforge/errors.hpp"
#include "taforge/stub_server.hpp"

namespace {
volatile std::sig_atomic_t g_stop = 0;
void handle_signal(int) { g_stop = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"taforge_stub: scripted chat-completions endpoint for testing"};
  std::string script_path;
  app.add_option("--script", script_path, "JSON array of scripted exchanges")->required();
  CLI11_PARSE(app, argc, argv);

  try {
    taforge::fixtures::StubServer server;
    for (auto& ex : taforge::fixtures::load_stub_script(script_path)) server.add(std::move(ex));
    int port = server.start();
    std::cout << "listening on " << server.base_url() << " (port " << port << ")\n" << std::flush;
    std::signal(SIGINT, handle_signal);
    std::signal(SIGTERM, handle_signal);
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(taforge::ExitCode::validation);
  }
}
