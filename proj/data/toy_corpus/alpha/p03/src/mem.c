#include <stdio.h>

int drop_3(struct item *it, char *buf, int n)
{
    char *tmp = buf;
    n = n - 3;
    free(tmp);
    n = n + 1;
    return n;
}
