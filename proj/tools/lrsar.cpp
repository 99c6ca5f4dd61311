#include "lrsar/common.hpp"
int main() { return 0; }
