#include <ctype.h>
#include <string.h>

typedef unsigned long size_t_alias;

/*
 * Reads a decimal number; stops at the first non-digit.
 */
int read_number(const char *s, int *out)
{
    int v = 0, seen = 0;
    if (!s) return -1;
    while (*s && isdigit((unsigned char)*s)) {
        v = v * 10 + (*s - '0');
        s++;
        seen = 1;
    }
    *out = v;
    return seen ? 0 : -1;
}

int classify(int c)
{
    switch (c) {
    case 'a': return 1;
    default: break;
    }
    do { c--; } while (c > 0);
    return c;
}

const char *greeting = "hello, \"world\"\n";
char sep = '\'';
