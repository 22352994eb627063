#include <iostream>

int main() {
  std::cout << "specising CLI placeholder\n";
  return 0;
}
