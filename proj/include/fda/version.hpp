#pragma once

#define FDAKIT_VERSION "0.1.0"
