int main() {
  int n, i, s;
  scanf("%d", &n);
  s = 0;
  i = 1;
  while (i <= n) {
    s = s + i;
    i = i + 2;
  }
  printf("%d\n", s);
  return 0;
}
