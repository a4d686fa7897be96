#include <iostream>

int main() {
  std::cout << "spinreg placeholder\n";
  return 0;
}
