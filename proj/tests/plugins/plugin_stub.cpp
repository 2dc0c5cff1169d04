// Test plugin: reads one DIPT tensor from stdin and, depending on argv[1],
//   pass    echoes it back
//   scale   multiplies by argv[2]
//   fail    writes to stderr and exits 1
//   short   echoes all but the last element
//   garbage writes bytes that are not a tensor
//   sleep   sleeps argv[2] seconds, then echoes
#include "dipiir/tensor_io.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "pass";
  dipiir::Tensor t;
  try {
    t = dipiir::read_tensor(std::cin);
  } catch (const std::exception& e) {
    std::cerr << "plugin_stub: " << e.what() << "\n";
    return 2;
  }
  if (mode == "fail") {
    std::cerr << "plugin_stub: asked to fail\n";
    return 1;
  }
  if (mode == "garbage") {
    std::cout << "not a tensor";
    return 0;
  }
  if (mode == "sleep") std::this_thread::sleep_for(std::chrono::duration<double>(argc > 2 ? std::stod(argv[2]) : 10.0));
  if (mode == "scale") t.values *= argc > 2 ? std::stod(argv[2]) : 1.0;
  if (mode == "short") {
    t.values.conservativeResize(t.values.size() - 1);
    t.dims = {static_cast<std::uint64_t>(t.values.size())};
  }
  dipiir::write_tensor(std::cout, t);
  std::cout.flush();
  return 0;
}
