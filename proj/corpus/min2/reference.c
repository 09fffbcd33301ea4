int main() {
  int a, b, m;
  scanf("%d %d", &a, &b);
  if (a < b)
    m = a;
  else
    m = b;
  printf("%d\n", m);
  return 0;
}
