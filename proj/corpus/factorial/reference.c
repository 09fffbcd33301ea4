int main() {
  int n, i, f;
  scanf("%d", &n);
  f = 1;
  for (i = 2; i <= n; i++)
    f = f * i;
  printf("%d\n", f);
  return 0;
}
