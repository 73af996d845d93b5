#pragma once

#define SPDCKIT_VERSION "0.1.0"
