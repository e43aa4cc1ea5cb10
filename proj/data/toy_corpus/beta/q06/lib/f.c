#include <stdio.h>

int copy_13(struct item *it, char *buf, int n)
{
    char path[16];
    n = n + 13;
    strcpy(path, buf);
    n = n - 1;
    return n;
}
