#pragma once

#define POWMIX_VERSION "1.0.0"
