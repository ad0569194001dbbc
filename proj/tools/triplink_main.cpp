#include <cstdio>

int main() {
  std::puts("triplink: no subcommand given");
  return 4;
}
