#include <iostream>

int main() {
    std::cout << "phk placeholder\n";
    return 0;
}
