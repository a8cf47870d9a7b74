import datetime

class Book:
    def __init__(self, title, author):
        self.title = title
        self.author = author
        self.borrower = None
        self.borrow_date = None
    def getBookInfo(self):
        return self.title, self.author

class User:
    def __init__(self, name, phone):
        self.name = name
        self.phone = phone
        self.borrowed_books = []
    def selectBook(self, library, book_title):
        library.lend_book(self.name, book_title)
    def returnBook(self, library, book_title):
        library.return_book(self.name, book_title)

class UserCard:
    def __init__(self, user):
        self.user = user
    def getUserInfo(self):
        return self.user.name, self.user.phone

class CounterStaff:
    def __init__(self):
        self.lending_info = {}
    def registerLendingInfo(self, user, book):
        self.lending_info[user.name] = book.title
    def performReturnProcess(self, user, book):
        del self.lending_info[user.name]
    def checkLendingStatus(self, user):
        return self.lending_info.get(user.name)
    def urgeDelayedUsers(self, library):
        library.check_overdue_books()

class LendingInformation:
    def __init__(self):
        self.info = {}
    def getLendingInfo(self, user):
        return self.info.get(user.name)
    def updateLendingInfo(self, user, book):
        self.info[user.name] = book.title

class Library:
    def __init__(self):
        self.books = []
        self.users = []
        self.staff = CounterStaff()
    def openShelf(self):
        pass
    def closeShelf(self):
        pass
    def add_book(self, title, author):
        self.books.append(Book(title, author))
    def add_user(self, name, phone):
        self.users.append(User(name, phone))
    def lend_book(self, user_name, book_title):
        for book in self.books:
            if book.title == book_title and book.borrower is None:
                for user in self.users:
                    if user.name == user_name:
                        book.borrower = user
                        book.borrow_date = datetime.datetime.now()
                        user.borrowed_books.append(book)
                        self.staff.registerLendingInfo(user, book)
                        return "Book borrowed successfully"
        return "Book is not available"
    def return_book(self, user_name, book_title):
        for book in self.books:
            if book.title == book_title and book.borrower is not None:
                for user in self.users:
                    if user.name == user_name:
                        book.borrower = None
                        book.borrow_date = None
                        user.borrowed_books.remove(book)
                        self.staff.performReturnProcess(user, book)
                        return "Book returned successfully"
        return "Book is not available"
    def check_overdue_books(self):
        for user in self.users:
            for book in user.borrowed_books:
                if (datetime.datetime.now() - book.borrow_date).days > 14:
                    print(f"User {user.name} with phone number {user.phone} has an overdue book: {book.title}")

library = Library()
library.add_book("Book1", "Author1")
library.add_user("User1", "1234567890")
user1 = library.users[0]
user1.selectBook(library, "Book1")
user1.returnBook(library, "Book1")
library.staff.urgeDelayedUsers(library)
