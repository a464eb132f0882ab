from revcurv.verify_cli import main

raise SystemExit(main())
