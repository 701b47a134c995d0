#include "depthnorm/error.hpp"
