#include <cstdio>

int main() {
  std::puts("perciso: CLI under construction");
  return 0;
}
