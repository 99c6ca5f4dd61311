#include "lrsar/common.hpp"
